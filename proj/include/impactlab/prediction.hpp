#pragma once

#include "impactlab/callgraph.hpp"
#include "impactlab/learning.hpp"

#include <set>
#include <string>
#include <string_view>

namespace impactlab {

/// Recommended pruning threshold.
inline constexpr double kDefaultThreshold = 0.2;

/// Candidate impact set for one changed node.
struct Prediction {
    NodeId changed;
    double threshold = 0.0;
    std::set<NodeId> cis;

    bool operator==(const Prediction&) const = default;
};

/// Walks from `changed` to its callers, transitively, crossing only edges
/// whose weight is >= `threshold`. Every test reached joins the CIS. A node
/// counts as visited once it is entered through a qualifying edge, so the
/// result does not depend on adjacency order. The changed node itself is
/// never part of the CIS.
Prediction predict(const WeightedCallGraph& w, std::string_view changed, double threshold = kDefaultThreshold);

/// Transitive-closure baseline: every test that reaches `changed`. Uses the
/// same convention as predict for the changed node itself, so that
/// predict(w, n, 0) == predict_tc(graph, n) for every node.
Prediction predict_tc(const CallGraph& g, std::string_view changed);

/// {"changed":"...","threshold":0.2,"cis":[...]}
std::string to_json(const Prediction& p);

} // namespace impactlab
