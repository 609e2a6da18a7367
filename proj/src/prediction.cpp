#include "impactlab/prediction.hpp"

#include "impactlab/error.hpp"

#include <json.hpp>

#include <deque>

namespace impactlab {

Prediction predict(const WeightedCallGraph& w, std::string_view changed, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        throw InvalidArgument("threshold must lie in [0, 1], got " + std::to_string(threshold));
    }
    const CallGraph& g = w.graph();
    const NodeIndex start = g.index_of(changed);

    Prediction out{g.node(start).id, threshold, {}};
    std::vector<bool> visited(g.node_count(), false);
    visited[start] = true;
    std::deque<NodeIndex> queue{start};
    while (!queue.empty()) {
        const NodeIndex u = queue.front();
        queue.pop_front();
        for (EdgeIndex e : g.incoming(u)) {
            if (w.weight(e) < threshold) {
                continue;
            }
            const NodeIndex caller = g.caller_of(e);
            if (visited[caller]) {
                continue;
            }
            visited[caller] = true;
            queue.push_back(caller);
            if (g.is_test(caller)) {
                out.cis.insert(g.node(caller).id);
            }
        }
    }
    return out;
}

Prediction predict_tc(const CallGraph& g, std::string_view changed) {
    const NodeIndex start = g.index_of(changed);
    Prediction out{g.node(start).id, 0.0, {}};
    for (NodeIndex t : reachable_tests(g, start)) {
        out.cis.insert(g.node(t).id);
    }
    return out;
}

std::string to_json(const Prediction& p) {
    nlohmann::ordered_json obj{{"changed", p.changed}, {"threshold", p.threshold}, {"cis", p.cis}};
    return obj.dump();
}

} // namespace impactlab
