#pragma once

#include "impactlab/callgraph.hpp"
#include "impactlab/dataset.hpp"

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace impactlab {

enum class Algorithm { Binary, Dichotomic };

std::string_view to_string(Algorithm algo);

/// A call graph with one propagation weight in [0, 1] per edge.
class WeightedCallGraph {
public:
    /// All weights start at 0: nothing is assumed to propagate.
    explicit WeightedCallGraph(std::shared_ptr<const CallGraph> graph);

    const CallGraph& graph() const { return *graph_; }
    const std::shared_ptr<const CallGraph>& shared_graph() const { return graph_; }

    std::span<const double> weights() const { return weights_; }
    double weight(EdgeIndex e) const { return weights_[e]; }
    /// Throws InvalidArgument if the edge does not exist.
    double weight(std::string_view caller, std::string_view callee) const;

    /// Throws InvalidArgument if `w` is outside [0, 1].
    void set_weight(EdgeIndex e, double w);

    bool operator==(const WeightedCallGraph& other) const {
        return *graph_ == *other.graph_ && weights_ == other.weights_;
    }

private:
    std::shared_ptr<const CallGraph> graph_;
    std::vector<double> weights_;
};

WeightedCallGraph init_weights(std::shared_ptr<const CallGraph> graph);
WeightedCallGraph init_weights(const CallGraph& graph);

/// Empirical impact probabilities: for a mutation point m and test t,
/// p(t, m) = alpha(t, m) / beta(m), where beta counts the records mutating m
/// and alpha counts those among them whose AIS contains t.
struct EmpiricalProbabilityTable {
    std::map<NodeId, std::size_t> beta;
    /// Keyed by (m, t); only pairs with alpha > 0 are stored.
    std::map<std::pair<NodeId, NodeId>, std::size_t> alpha;

    /// 0 for pairs never observed together.
    double probability(std::string_view m, std::string_view t) const;
};

/// Throws InvalidArgument on an empty training set.
EmpiricalProbabilityTable empirical_probabilities(std::span<const MutationRecord> training);

/// Memoized union of the edges lying on the simple paths from a changed
/// node up to a test. Shared across trainings on the same graph; safe for
/// concurrent use.
class PathIndex {
public:
    explicit PathIndex(std::shared_ptr<const CallGraph> graph, std::size_t cap = kDefaultPathCap);

    const CallGraph& graph() const { return *graph_; }
    std::size_t cap() const { return cap_; }

    /// Sorted, duplicate-free edge indices.
    const std::vector<EdgeIndex>& edges_between(NodeIndex changed, NodeIndex test);

    /// Number of (changed, test) pairs whose enumeration hit the cap.
    std::size_t truncated_pairs() const;

private:
    std::shared_ptr<const CallGraph> graph_;
    std::size_t cap_;
    mutable std::mutex mutex_;
    std::unordered_map<std::uint64_t, std::vector<EdgeIndex>> cache_;
    std::size_t truncated_ = 0;
};

/// Sets every edge on a simple path from m up to t to 1.
void update_binary(WeightedCallGraph& w, std::string_view m, std::string_view t, PathIndex* paths = nullptr);

/// Moves every edge on a simple path from m up to t halfway toward p.
void update_dichotomic(WeightedCallGraph& w, std::string_view m, std::string_view t, double p,
                       PathIndex* paths = nullptr);

/// Learns weights from zero. For Dichotomic, probabilities are counted over
/// the whole training set first. Records are visited in order and each
/// record's tests in ascending id order.
WeightedCallGraph train(std::shared_ptr<const CallGraph> graph, std::span<const MutationRecord> training,
                        Algorithm algo, PathIndex* paths = nullptr);

// Weight dump format (JSON lines, "cig-weights" version 1).
void save_weights(const WeightedCallGraph& w, std::ostream& out);
std::string save_weights(const WeightedCallGraph& w);
/// Every edge of `graph` must receive exactly one weight.
WeightedCallGraph load_weights(std::istream& in, std::shared_ptr<const CallGraph> graph);
WeightedCallGraph load_weights_file(const std::string& path, std::shared_ptr<const CallGraph> graph);

} // namespace impactlab
