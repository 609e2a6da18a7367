#include "impactlab/callgraph.hpp"

#include "impactlab/digest.hpp"
#include "impactlab/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace impactlab {

namespace {

constexpr std::string_view kGraphFormat = "cig-graph";
constexpr int kGraphVersion = 1;

} // namespace

std::string_view to_string(NodeKind kind) {
    return kind == NodeKind::Test ? "test" : "app";
}

std::optional<NodeIndex> CallGraph::find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

NodeIndex CallGraph::index_of(std::string_view id) const {
    if (auto i = find(id)) {
        return *i;
    }
    throw InvalidArgument("unknown node id '" + std::string(id) + "'");
}

std::optional<EdgeIndex> CallGraph::find_edge(std::string_view caller, std::string_view callee) const {
    auto from = find(caller);
    auto to = find(callee);
    if (!from || !to) {
        return std::nullopt;
    }
    for (EdgeIndex e : outgoing_[*from]) {
        if (endpoints_[e].second == *to) {
            return e;
        }
    }
    return std::nullopt;
}

CallGraphBuilder& CallGraphBuilder::add_node(MethodNode node) {
    if (!ids_.insert(node.id).second) {
        throw IntegrityError("duplicate node id '" + node.id + "'");
    }
    nodes_.push_back(std::move(node));
    return *this;
}

CallGraphBuilder& CallGraphBuilder::add_edge(CallEdge edge) {
    edges_.push_back(std::move(edge));
    return *this;
}

CallGraph CallGraphBuilder::build() const {
    CallGraph g;
    g.nodes_ = nodes_;
    std::sort(g.nodes_.begin(), g.nodes_.end(),
              [](const MethodNode& a, const MethodNode& b) { return a.id < b.id; });
    for (NodeIndex i = 0; i < g.nodes_.size(); ++i) {
        g.index_.emplace(g.nodes_[i].id, i);
    }

    std::map<std::pair<NodeIndex, NodeIndex>, bool> merged;
    for (const CallEdge& e : edges_) {
        auto from = g.find(e.caller);
        if (!from) {
            throw IntegrityError("edge references unknown node '" + e.caller + "'");
        }
        auto to = g.find(e.callee);
        if (!to) {
            throw IntegrityError("edge references unknown node '" + e.callee + "'");
        }
        auto [it, inserted] = merged.emplace(std::make_pair(*from, *to), e.via_cha);
        if (!inserted) {
            it->second = it->second && e.via_cha;
        }
    }

    g.incoming_.resize(g.nodes_.size());
    g.outgoing_.resize(g.nodes_.size());
    g.edges_.reserve(merged.size());
    g.endpoints_.reserve(merged.size());
    for (const auto& [ends, via_cha] : merged) {
        const EdgeIndex e = g.edges_.size();
        g.edges_.push_back({g.nodes_[ends.first].id, g.nodes_[ends.second].id, via_cha});
        g.endpoints_.push_back(ends);
        g.outgoing_[ends.first].push_back(e);
        g.incoming_[ends.second].push_back(e);
    }
    return g;
}

EdgePaths enumerate_simple_paths(const CallGraph& g, NodeIndex changed, NodeIndex test, std::size_t cap) {
    if (cap == 0) {
        throw InvalidArgument("path cap must be at least 1");
    }
    EdgePaths result;
    if (changed == test) {
        result.paths.emplace_back();
        return result;
    }

    // Only nodes that the test can reach are worth stepping onto.
    std::vector<bool> useful(g.node_count(), false);
    std::deque<NodeIndex> queue{test};
    useful[test] = true;
    while (!queue.empty()) {
        NodeIndex u = queue.front();
        queue.pop_front();
        for (EdgeIndex e : g.outgoing(u)) {
            NodeIndex v = g.callee_of(e);
            if (!useful[v]) {
                useful[v] = true;
                queue.push_back(v);
            }
        }
    }
    if (!useful[changed]) {
        return result;
    }

    // Iterative DFS over callers; incoming lists are sorted by caller id, so
    // paths come out in lexicographic order of their node sequences.
    struct Frame {
        NodeIndex node;
        std::size_t next = 0;
    };
    std::vector<bool> on_path(g.node_count(), false);
    std::vector<Frame> stack{{changed}};
    std::vector<EdgeIndex> edges;
    on_path[changed] = true;

    while (!stack.empty()) {
        Frame& top = stack.back();
        auto incoming = g.incoming(top.node);
        if (top.next == incoming.size()) {
            on_path[top.node] = false;
            stack.pop_back();
            if (!edges.empty()) {
                edges.pop_back();
            }
            continue;
        }
        const EdgeIndex e = incoming[top.next++];
        const NodeIndex caller = g.caller_of(e);
        if (on_path[caller] || !useful[caller]) {
            continue;
        }
        if (caller == test) {
            if (result.paths.size() == cap) {
                result.truncated = true;
                return result;
            }
            result.paths.push_back(edges);
            result.paths.back().push_back(e);
            continue;
        }
        on_path[caller] = true;
        edges.push_back(e);
        stack.push_back({caller});
    }
    return result;
}

PathSet simple_paths(const CallGraph& g, std::string_view changed, std::string_view test, std::size_t cap) {
    const NodeIndex from = g.index_of(changed);
    const NodeIndex to = g.index_of(test);
    EdgePaths found = enumerate_simple_paths(g, from, to, cap);

    PathSet out;
    out.truncated = found.truncated;
    out.paths.reserve(found.paths.size());
    for (const auto& path : found.paths) {
        std::vector<NodeId> ids{g.node(from).id};
        for (EdgeIndex e : path) {
            ids.push_back(g.edge(e).caller);
        }
        out.paths.push_back(std::move(ids));
    }
    return out;
}

std::vector<NodeIndex> reachable_tests(const CallGraph& g, NodeIndex changed) {
    std::vector<bool> seen(g.node_count(), false);
    std::deque<NodeIndex> queue{changed};
    seen[changed] = true;
    std::vector<NodeIndex> tests;
    while (!queue.empty()) {
        NodeIndex u = queue.front();
        queue.pop_front();
        for (EdgeIndex e : g.incoming(u)) {
            NodeIndex caller = g.caller_of(e);
            if (seen[caller]) {
                continue;
            }
            seen[caller] = true;
            queue.push_back(caller);
            if (g.is_test(caller)) {
                tests.push_back(caller);
            }
        }
    }
    std::sort(tests.begin(), tests.end());
    return tests;
}

std::set<NodeId> transitive_impact_set(const CallGraph& g, std::string_view changed) {
    const NodeIndex start = g.index_of(changed);
    std::set<NodeId> out;
    if (g.is_test(start)) {
        out.insert(g.node(start).id);
    }
    for (NodeIndex t : reachable_tests(g, start)) {
        out.insert(g.node(t).id);
    }
    return out;
}

CallGraph strip_cha(const CallGraph& g) {
    CallGraphBuilder builder;
    for (const MethodNode& n : g.nodes()) {
        builder.add_node(n);
    }
    for (const CallEdge& e : g.edges()) {
        if (!e.via_cha) {
            builder.add_edge(e);
        }
    }
    return builder.build();
}

CallGraph load_graph(std::istream& in) {
    using nlohmann::json;

    CallGraphBuilder builder;
    std::string line;
    std::size_t line_no = 0;
    bool seen_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!obj.is_object()) {
            throw ParseError("expected a JSON object", line_no);
        }

        try {
            if (!seen_header) {
                if (obj.value("format", "") != kGraphFormat || obj.value("version", 0) != kGraphVersion) {
                    throw ParseError("expected header {\"format\":\"cig-graph\",\"version\":1}", line_no);
                }
                seen_header = true;
                continue;
            }
            if (auto it = obj.find("node"); it != obj.end()) {
                const auto& n = *it;
                const std::string kind = n.at("kind").get<std::string>();
                if (kind != "app" && kind != "test") {
                    throw ParseError("node kind must be \"app\" or \"test\", got \"" + kind + "\"", line_no);
                }
                builder.add_node({n.at("id").get<std::string>(), n.at("name").get<std::string>(),
                                  kind == "test" ? NodeKind::Test : NodeKind::Application});
            } else if (auto it = obj.find("edge"); it != obj.end()) {
                const auto& e = *it;
                builder.add_edge({e.at("caller").get<std::string>(), e.at("callee").get<std::string>(),
                                  e.value("via_cha", false)});
            } else {
                throw ParseError("expected a \"node\" or \"edge\" record", line_no);
            }
        } catch (const json::exception& e) {
            throw ParseError(std::string("malformed record: ") + e.what(), line_no);
        }
    }
    return builder.build();
}

CallGraph load_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open graph file '" + path + "'");
    }
    return load_graph(in);
}

void save_graph(const CallGraph& g, std::ostream& out) {
    using nlohmann::ordered_json;

    out << ordered_json{{"format", kGraphFormat}, {"version", kGraphVersion}}.dump() << '\n';
    for (const MethodNode& n : g.nodes()) {
        ordered_json body{{"id", n.id}, {"name", n.name}, {"kind", to_string(n.kind)}};
        out << ordered_json{{"node", body}}.dump() << '\n';
    }
    for (const CallEdge& e : g.edges()) {
        ordered_json body{{"caller", e.caller}, {"callee", e.callee}, {"via_cha", e.via_cha}};
        out << ordered_json{{"edge", body}}.dump() << '\n';
    }
}

std::string save_graph(const CallGraph& g) {
    std::ostringstream out;
    save_graph(g, out);
    return out.str();
}

std::string graph_hash(const CallGraph& g) {
    return sha256_hex(save_graph(g));
}

} // namespace impactlab
