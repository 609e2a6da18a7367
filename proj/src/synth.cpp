#include "impactlab/synth.hpp"

#include "impactlab/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <string>

namespace impactlab::synth {

namespace {

std::string padded(std::string_view prefix, std::size_t i, std::size_t count) {
    std::string digits = std::to_string(i);
    const std::size_t width = std::max<std::size_t>(2, std::to_string(count - 1).size());
    return std::string(prefix) + std::string(width - std::min(width, digits.size()), '0') + digits;
}

/// Share of application nodes reachable from some test along call edges.
double reachable_share(const CallGraph& g) {
    std::vector<bool> seen(g.node_count(), false);
    std::deque<NodeIndex> queue;
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        if (g.is_test(i)) {
            seen[i] = true;
            queue.push_back(i);
        }
    }
    while (!queue.empty()) {
        const NodeIndex u = queue.front();
        queue.pop_front();
        for (EdgeIndex e : g.outgoing(u)) {
            const NodeIndex v = g.callee_of(e);
            if (!seen[v]) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    std::size_t apps = 0;
    std::size_t reached = 0;
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        if (!g.is_test(i)) {
            ++apps;
            reached += seen[i] ? 1 : 0;
        }
    }
    return apps == 0 ? 1.0 : static_cast<double>(reached) / static_cast<double>(apps);
}

} // namespace

void validate(const SynthParams& params) {
    if (params.app_nodes == 0 || params.test_nodes == 0) {
        throw InvalidArgument("synthetic models need at least one application and one test node");
    }
    if (!(params.density > 0.0 && params.density <= 1.0)) {
        throw InvalidArgument("edge density must lie in (0, 1]");
    }
    if (params.palette.empty()) {
        throw InvalidArgument("probability palette is empty");
    }
    for (double p : params.palette) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InvalidArgument("palette value outside [0, 1]: " + std::to_string(p));
        }
    }
}

WeightedCallGraph PlantedModel::as_weights() const {
    WeightedCallGraph w(graph);
    for (EdgeIndex e = 0; e < true_prob.size(); ++e) {
        w.set_weight(e, true_prob[e]);
    }
    return w;
}

PlantedModel make_model(CallGraph graph, std::vector<double> true_prob) {
    if (true_prob.size() != graph.edge_count()) {
        throw InvalidArgument("expected one probability per edge");
    }
    for (double p : true_prob) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InvalidArgument("edge probability outside [0, 1]: " + std::to_string(p));
        }
    }
    return {std::make_shared<const CallGraph>(std::move(graph)), std::move(true_prob)};
}

PlantedModel generate_model(const SynthParams& params) {
    validate(params);
    std::vector<std::string> apps;
    std::vector<std::string> tests;
    for (std::size_t i = 0; i < params.app_nodes; ++i) {
        apps.push_back(padded("a", i, params.app_nodes));
    }
    for (std::size_t i = 0; i < params.test_nodes; ++i) {
        tests.push_back(padded("test_", i, params.test_nodes));
    }

    for (std::size_t attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
        Rng rng(derive_seed(params.seed, attempt));
        CallGraphBuilder builder;
        for (const auto& a : apps) {
            builder.add_node({a, a, NodeKind::Application});
        }
        for (const auto& t : tests) {
            builder.add_node({t, t, NodeKind::Test});
        }
        std::map<std::pair<std::string, std::string>, double> prob;
        auto maybe_edge = [&](const std::string& caller, const std::string& callee) {
            if (!rng.bernoulli(params.density)) {
                return;
            }
            const double p = params.palette[rng.uniform_index(params.palette.size())];
            builder.add_edge({caller, callee, false});
            prob[{caller, callee}] = p;
        };
        for (const auto& t : tests) {
            for (const auto& a : apps) {
                maybe_edge(t, a);
            }
        }
        for (std::size_t i = 0; i < apps.size(); ++i) {
            for (std::size_t j = i + 1; j < apps.size(); ++j) {
                maybe_edge(apps[i], apps[j]);
            }
        }
        CallGraph g = builder.build();
        if (reachable_share(g) < kMinReachableShare) {
            continue;
        }
        std::vector<double> true_prob(g.edge_count());
        for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
            true_prob[e] = prob.at({g.edge(e).caller, g.edge(e).callee});
        }
        return make_model(std::move(g), std::move(true_prob));
    }
    throw GenerationError("no model with " + std::to_string(static_cast<int>(kMinReachableShare * 100)) +
                          "% reachable application nodes after " + std::to_string(kMaxGenerationAttempts) +
                          " attempts; raise the edge density");
}

SimulatedImpact simulate_once(const PlantedModel& model, NodeIndex changed, Rng& rng) {
    const CallGraph& g = *model.graph;
    SimulatedImpact out;
    out.fired.resize(g.edge_count());
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
        out.fired[e] = rng.bernoulli(model.true_prob[e]);
    }
    std::vector<bool> seen(g.node_count(), false);
    std::deque<NodeIndex> queue{changed};
    seen[changed] = true;
    while (!queue.empty()) {
        const NodeIndex u = queue.front();
        queue.pop_front();
        for (EdgeIndex e : g.incoming(u)) {
            const NodeIndex caller = g.caller_of(e);
            if (out.fired[e] && !seen[caller]) {
                seen[caller] = true;
                queue.push_back(caller);
            }
        }
    }
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        if (i != changed && seen[i] && g.is_test(i)) {
            out.ais.insert(g.node(i).id);
        }
    }
    return out;
}

MutationDataset simulate_dataset(const PlantedModel& model, std::size_t mutations_per_node, std::uint64_t seed) {
    if (mutations_per_node == 0) {
        throw InvalidArgument("at least one mutation per node is required");
    }
    const CallGraph& g = *model.graph;
    MutationDataset ds;
    ds.graph_hash = graph_hash(g);
    for (NodeIndex m = 0; m < g.node_count(); ++m) {
        if (g.is_test(m)) {
            continue;
        }
        Rng rng(derive_seed(seed, m));
        for (std::size_t k = 0; k < mutations_per_node; ++k) {
            SimulatedImpact impact = simulate_once(model, m, rng);
            ds.records.push_back(
                {"synth:" + g.node(m).id + ":" + std::to_string(k), g.node(m).id, "SYN", std::move(impact.ais)});
        }
    }
    return ds;
}

} // namespace impactlab::synth
