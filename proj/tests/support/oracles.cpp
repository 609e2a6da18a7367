#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

namespace oracle {

std::set<std::vector<NodeId>> all_simple_paths(const CallGraph& g, const NodeId& changed, const NodeId& test) {
    std::set<std::vector<NodeId>> out;
    std::vector<NodeId> stack{test};
    std::function<void(const NodeId&)> walk = [&](const NodeId& at) {
        if (at == changed) {
            out.emplace(stack.rbegin(), stack.rend());
            return;
        }
        for (const auto& e : g.edges()) {
            if (e.caller != at || std::find(stack.begin(), stack.end(), e.callee) != stack.end()) {
                continue;
            }
            stack.push_back(e.callee);
            walk(e.callee);
            stack.pop_back();
        }
    };
    if (changed != test) {
        walk(test);
    }
    return out;
}

std::set<NodeId> closure_tests(const CallGraph& g, const NodeId& changed) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (const auto& e : g.edges()) {
        reach[*g.find(e.caller)][*g.find(e.callee)] = true;
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (reach[i][k] && reach[k][j]) {
                    reach[i][j] = true;
                }
            }
        }
    }
    const std::size_t m = *g.find(changed);
    std::set<NodeId> out;
    for (std::size_t i = 0; i < n; ++i) {
        if (i != m && reach[i][m] && g.node(i).kind == NodeKind::Test) {
            out.insert(g.node(i).id);
        }
    }
    return out;
}

std::set<NodeId> fixpoint_predict(const WeightedCallGraph& w, const NodeId& changed, double th) {
    const CallGraph& g = w.graph();
    std::set<NodeId> reached{changed};
    for (bool grew = true; grew;) {
        grew = false;
        for (std::size_t e = 0; e < g.edge_count(); ++e) {
            const auto& edge = g.edge(e);
            if (w.weight(e) >= th && reached.contains(edge.callee) && !reached.contains(edge.caller)) {
                reached.insert(edge.caller);
                grew = true;
            }
        }
    }
    std::set<NodeId> out;
    for (const auto& id : reached) {
        if (id != changed && g.node(*g.find(id)).kind == NodeKind::Test) {
            out.insert(id);
        }
    }
    return out;
}

MetricTriple direct_metrics(const std::set<NodeId>& ais, const std::set<NodeId>& cis) {
    double both = 0;
    for (const auto& t : ais) {
        if (cis.contains(t)) {
            both += 1;
        }
    }
    MetricTriple m;
    if (cis.empty()) {
        m.precision = ais.empty() ? 1 : 0;
    } else {
        m.precision = both / static_cast<double>(cis.size());
    }
    if (ais.empty()) {
        m.recall = cis.empty() ? 1 : 0;
    } else {
        m.recall = both / static_cast<double>(ais.size());
    }
    m.fscore = m.precision + m.recall == 0 ? 0 : 2 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

std::vector<double> replay_training(const CallGraph& g, std::span<const MutationRecord> training, bool dichotomic) {
    std::map<NodeId, double> beta;
    std::map<std::pair<NodeId, NodeId>, double> alpha;
    for (const auto& r : training) {
        beta[r.m] += 1;
        for (const auto& t : r.ais) {
            alpha[{r.m, t}] += 1;
        }
    }
    std::vector<double> w(g.edge_count(), 0.0);
    for (const auto& r : training) {
        for (const auto& t : r.ais) {
            std::set<std::size_t> edges;
            for (const auto& path : all_simple_paths(g, r.m, t)) {
                for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                    // changed-first orientation: path[i+1] calls path[i]
                    edges.insert(*g.find_edge(path[i + 1], path[i]));
                }
            }
            const double p = alpha[{r.m, t}] / beta[r.m];
            for (std::size_t e : edges) {
                w[e] = dichotomic ? (w[e] + p) / 2 : 1.0;
            }
        }
    }
    return w;
}

namespace {

double pair_count_u(const std::vector<double>& a, const std::vector<double>& b) {
    double u = 0;
    for (double x : a) {
        for (double y : b) {
            u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
        }
    }
    return u;
}

} // namespace

UTest enumerate_mann_whitney(std::span<const double> a, std::span<const double> b) {
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::size_t n = pooled.size();
    const std::size_t k = a.size();
    const double mean = static_cast<double>(a.size() * b.size()) / 2.0;

    UTest out;
    out.u = pair_count_u({a.begin(), a.end()}, {b.begin(), b.end()});
    const double observed = std::fabs(out.u - mean);

    double extreme = 0;
    double total = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) {
            continue;
        }
        std::vector<double> xa, xb;
        for (std::size_t i = 0; i < n; ++i) {
            ((mask >> i) & 1u ? xa : xb).push_back(pooled[i]);
        }
        total += 1;
        if (std::fabs(pair_count_u(xa, xb) - mean) >= observed - 1e-9) {
            extreme += 1;
        }
    }
    out.p = extreme / total;
    return out;
}

} // namespace oracle
