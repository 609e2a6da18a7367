#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace impactlab {

using NodeId = std::string;
using NodeIndex = std::size_t;
using EdgeIndex = std::size_t;

enum class NodeKind { Application, Test };

std::string_view to_string(NodeKind kind);

struct MethodNode {
    NodeId id;
    std::string name;
    NodeKind kind = NodeKind::Application;

    bool operator==(const MethodNode&) const = default;
};

/// A caller -> callee relation. `via_cha` marks edges that exist only because
/// dynamic dispatch was resolved to every possible implementor.
struct CallEdge {
    NodeId caller;
    NodeId callee;
    bool via_cha = false;

    bool operator==(const CallEdge&) const = default;
};

/// Immutable call graph. Nodes are kept sorted by id and edges by
/// (caller, callee), so indices are stable and iteration is canonical.
class CallGraph {
public:
    CallGraph() = default;

    std::span<const MethodNode> nodes() const { return nodes_; }
    std::span<const CallEdge> edges() const { return edges_; }
    std::size_t node_count() const { return nodes_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool empty() const { return nodes_.empty(); }

    const MethodNode& node(NodeIndex i) const { return nodes_[i]; }
    const CallEdge& edge(EdgeIndex e) const { return edges_[e]; }
    NodeIndex caller_of(EdgeIndex e) const { return endpoints_[e].first; }
    NodeIndex callee_of(EdgeIndex e) const { return endpoints_[e].second; }

    std::optional<NodeIndex> find(std::string_view id) const;
    /// Throws InvalidArgument naming `id` when absent.
    NodeIndex index_of(std::string_view id) const;
    bool contains(std::string_view id) const { return find(id).has_value(); }
    bool is_test(NodeIndex i) const { return nodes_[i].kind == NodeKind::Test; }

    /// Edges whose callee is `i`, ordered by caller id.
    std::span<const EdgeIndex> incoming(NodeIndex i) const { return incoming_[i]; }
    /// Edges whose caller is `i`, ordered by callee id.
    std::span<const EdgeIndex> outgoing(NodeIndex i) const { return outgoing_[i]; }

    std::optional<EdgeIndex> find_edge(std::string_view caller, std::string_view callee) const;

    bool operator==(const CallGraph& other) const {
        return nodes_ == other.nodes_ && edges_ == other.edges_;
    }

private:
    friend class CallGraphBuilder;

    std::vector<MethodNode> nodes_;
    std::vector<CallEdge> edges_;
    std::vector<std::pair<NodeIndex, NodeIndex>> endpoints_;
    std::vector<std::vector<EdgeIndex>> incoming_;
    std::vector<std::vector<EdgeIndex>> outgoing_;
    std::unordered_map<std::string, NodeIndex> index_;
};

/// Accumulates nodes and edges, then freezes them into a CallGraph.
/// Duplicate (caller, callee) edges collapse into one; the merged edge is
/// flagged via_cha only if every contributing edge was.
class CallGraphBuilder {
public:
    /// Throws IntegrityError on a duplicate id.
    CallGraphBuilder& add_node(MethodNode node);
    CallGraphBuilder& add_edge(CallEdge edge);

    /// Throws IntegrityError naming the first dangling edge endpoint.
    CallGraph build() const;

private:
    std::vector<MethodNode> nodes_;
    std::vector<CallEdge> edges_;
    std::set<std::string, std::less<>> ids_;
};

inline constexpr std::size_t kDefaultPathCap = 10'000;

/// Simple paths between a changed node and a test, as edge sequences.
/// Each path starts at the changed node and climbs callers up to the test.
struct EdgePaths {
    std::vector<std::vector<EdgeIndex>> paths;
    bool truncated = false;
};

/// Node-id rendering of the same enumeration, in impact orientation
/// (changed node first, test last).
struct PathSet {
    std::vector<std::vector<NodeId>> paths;
    bool truncated = false;
};

EdgePaths enumerate_simple_paths(const CallGraph& g, NodeIndex changed, NodeIndex test,
                                 std::size_t cap = kDefaultPathCap);

PathSet simple_paths(const CallGraph& g, std::string_view changed, std::string_view test,
                     std::size_t cap = kDefaultPathCap);

/// Test nodes from which `changed` is reachable along call edges. The node
/// itself is included only when it is a test.
std::set<NodeId> transitive_impact_set(const CallGraph& g, std::string_view changed);

/// Index form of transitive_impact_set without the changed node itself.
std::vector<NodeIndex> reachable_tests(const CallGraph& g, NodeIndex changed);

CallGraph strip_cha(const CallGraph& g);

// Graph file format (JSON lines, "cig-graph" version 1).
CallGraph load_graph(std::istream& in);
CallGraph load_graph_file(const std::string& path);
void save_graph(const CallGraph& g, std::ostream& out);
std::string save_graph(const CallGraph& g);

/// SHA-256 of the canonical serialization.
std::string graph_hash(const CallGraph& g);

} // namespace impactlab
