#pragma once

// Deliberately naive reference implementations. They share no code with the
// library beyond the graph data model, so agreement is meaningful.

#include "impactlab/callgraph.hpp"
#include "impactlab/dataset.hpp"
#include "impactlab/evaluation.hpp"
#include "impactlab/learning.hpp"

#include <cstdint>
#include <set>
#include <span>
#include <vector>

namespace oracle {

using namespace impactlab;

/// Every simple path from `test` down to `changed`, reported changed-first.
std::set<std::vector<NodeId>> all_simple_paths(const CallGraph& g, const NodeId& changed, const NodeId& test);

/// Tests that reach `changed` per a Floyd-Warshall closure; excludes `changed`.
std::set<NodeId> closure_tests(const CallGraph& g, const NodeId& changed);

/// Fixpoint: keep adding callers over edges with weight >= th until stable.
std::set<NodeId> fixpoint_predict(const WeightedCallGraph& w, const NodeId& changed, double th);

/// Precision, recall and F computed directly from the set definitions.
MetricTriple direct_metrics(const std::set<NodeId>& ais, const std::set<NodeId>& cis);

/// Edge weights after replaying the training records with path edges taken
/// from all_simple_paths.
std::vector<double> replay_training(const CallGraph& g, std::span<const MutationRecord> training, bool dichotomic);

struct UTest {
    double u = 0.0;
    double p = 1.0;
};

/// U by pair counting and the two-sided p-value by listing every way of
/// labelling the pooled values with |a| "a" labels.
UTest enumerate_mann_whitney(std::span<const double> a, std::span<const double> b);

} // namespace oracle
