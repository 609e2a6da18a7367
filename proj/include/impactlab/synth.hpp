#pragma once

#include "impactlab/callgraph.hpp"
#include "impactlab/dataset.hpp"
#include "impactlab/learning.hpp"
#include "impactlab/random.hpp"

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <vector>

namespace impactlab::synth {

struct SynthParams {
    std::size_t app_nodes = 60;
    std::size_t test_nodes = 20;
    /// Probability that each admissible edge is present.
    double density = 0.05;
    std::vector<double> palette{0.0, 0.9};
    std::uint64_t seed = 0;
};

/// Throws InvalidArgument on zero counts, density outside (0, 1], an empty
/// palette or palette values outside [0, 1].
void validate(const SynthParams& params);

/// A call graph whose edges each propagate a change with a known probability.
struct PlantedModel {
    std::shared_ptr<const CallGraph> graph;
    /// Indexed by EdgeIndex.
    std::vector<double> true_prob;

    double probability(EdgeIndex e) const { return true_prob[e]; }
    /// The planted probabilities as a weighted graph, e.g. for dumping.
    WeightedCallGraph as_weights() const;
};

/// Attempts per generate_model call before giving up.
inline constexpr std::size_t kMaxGenerationAttempts = 100;
/// Share of application nodes that must be reachable from some test.
inline constexpr double kMinReachableShare = 0.9;

/// Random layered DAG: tests call application nodes, and application node i
/// may call application node j only when i < j. Each admissible edge is kept
/// with probability `density` and gets a palette value chosen uniformly.
/// Application nodes are "a00", "a01", ...; tests "test_00", ... (zero padded
/// to a common width). Throws GenerationError when no attempt reaches the
/// required share of reachable application nodes.
PlantedModel generate_model(const SynthParams& params);

/// Builds a model from an explicit graph and per-edge probabilities.
PlantedModel make_model(CallGraph graph, std::vector<double> true_prob);

struct SimulatedImpact {
    /// Edges whose Bernoulli draw succeeded.
    std::vector<bool> fired;
    /// Tests reached from the changed node through fired edges.
    std::set<NodeId> ais;
};

/// One simulated change at `changed`: every edge draws once, in edge order,
/// then the impact spreads from `changed` to callers over fired edges.
SimulatedImpact simulate_once(const PlantedModel& model, NodeIndex changed, Rng& rng);

/// `mutations_per_node` simulated changes at every application node, in node
/// order. Node i draws from a generator seeded with derive_seed(seed, i), so
/// each node's records are independent of the others. Records are labelled
/// "synth:<node>:<k>" with operator "SYN".
MutationDataset simulate_dataset(const PlantedModel& model, std::size_t mutations_per_node, std::uint64_t seed);

} // namespace impactlab::synth
