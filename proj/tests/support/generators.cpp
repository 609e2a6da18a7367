#include "generators.hpp"

#include <cstdio>

namespace gen {

namespace {

std::string label(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%02zu", prefix, i);
    return buf;
}

} // namespace

CallGraph random_graph(Rng& rng, const GraphShape& shape) {
    const std::size_t n = std::max<std::size_t>(shape.nodes, 2);
    std::size_t tests = 0;
    for (std::size_t i = 0; i < n; ++i) {
        tests += rng.bernoulli(shape.test_share) ? 1 : 0;
    }
    tests = std::clamp<std::size_t>(tests, 1, n - 1);
    std::vector<std::string> apps;
    std::vector<std::string> test_ids;
    CallGraphBuilder b;
    for (std::size_t i = 0; i < n - tests; ++i) {
        apps.push_back(label("n", i));
        b.add_node({apps.back(), apps.back(), NodeKind::Application});
    }
    for (std::size_t i = 0; i < tests; ++i) {
        test_ids.push_back(label("test_", i));
        b.add_node({test_ids.back(), test_ids.back(), NodeKind::Test});
    }
    auto maybe = [&](const std::string& from, const std::string& to) {
        if (rng.bernoulli(shape.edge_prob)) {
            b.add_edge({from, to, shape.cha_edges && rng.bernoulli(0.3)});
        }
    };
    for (const auto& t : test_ids) {
        for (const auto& a : apps) {
            maybe(t, a);
        }
    }
    for (const auto& x : apps) {
        for (const auto& y : apps) {
            if (x != y || shape.self_loops) {
                maybe(x, y);
            }
        }
    }
    return b.build();
}

WeightedCallGraph random_weights(Rng& rng, std::shared_ptr<const CallGraph> g) {
    static constexpr double kSpecial[] = {0.0, 0.1, 0.2, 0.5, 1.0};
    WeightedCallGraph w(g);
    for (EdgeIndex e = 0; e < g->edge_count(); ++e) {
        w.set_weight(e, rng.bernoulli(0.3) ? kSpecial[rng.uniform_index(5)] : rng.uniform01());
    }
    return w;
}

std::vector<MutationRecord> random_records(Rng& rng, const CallGraph& g, std::size_t count) {
    std::vector<NodeIndex> apps;
    for (NodeIndex i = 0; i < g.node_count(); ++i) {
        if (!g.is_test(i)) {
            apps.push_back(i);
        }
    }
    std::vector<MutationRecord> out;
    for (std::size_t k = 0; k < count; ++k) {
        const NodeIndex m = apps[rng.uniform_index(apps.size())];
        MutationRecord r{"mut" + std::to_string(k), g.node(m).id, rng.bernoulli(0.5) ? "AOR" : "ROR", {}};
        for (NodeIndex t : reachable_tests(g, m)) {
            if (rng.bernoulli(0.5)) {
                r.ais.insert(g.node(t).id);
            }
        }
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace gen
