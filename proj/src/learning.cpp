#include "impactlab/learning.hpp"

#include "impactlab/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace impactlab {

std::string_view to_string(Algorithm algo) {
    return algo == Algorithm::Binary ? "binary" : "dichotomic";
}

WeightedCallGraph::WeightedCallGraph(std::shared_ptr<const CallGraph> graph)
    : graph_(std::move(graph)), weights_(graph_->edge_count(), 0.0) {}

double WeightedCallGraph::weight(std::string_view caller, std::string_view callee) const {
    auto e = graph_->find_edge(caller, callee);
    if (!e) {
        throw InvalidArgument("no edge " + std::string(caller) + " -> " + std::string(callee));
    }
    return weights_[*e];
}

void WeightedCallGraph::set_weight(EdgeIndex e, double w) {
    if (!(w >= 0.0 && w <= 1.0)) {
        throw InvalidArgument("edge weight must lie in [0, 1], got " + std::to_string(w));
    }
    weights_.at(e) = w;
}

WeightedCallGraph init_weights(std::shared_ptr<const CallGraph> graph) {
    return WeightedCallGraph(std::move(graph));
}

WeightedCallGraph init_weights(const CallGraph& graph) {
    return WeightedCallGraph(std::make_shared<const CallGraph>(graph));
}

double EmpiricalProbabilityTable::probability(std::string_view m, std::string_view t) const {
    auto a = alpha.find({std::string(m), std::string(t)});
    if (a == alpha.end()) {
        return 0.0;
    }
    return static_cast<double>(a->second) / static_cast<double>(beta.at(std::string(m)));
}

EmpiricalProbabilityTable empirical_probabilities(std::span<const MutationRecord> training) {
    if (training.empty()) {
        throw InvalidArgument("empirical probabilities need a nonempty training set");
    }
    EmpiricalProbabilityTable table;
    for (const auto& r : training) {
        ++table.beta[r.m];
        for (const auto& t : r.ais) {
            ++table.alpha[{r.m, t}];
        }
    }
    return table;
}

PathIndex::PathIndex(std::shared_ptr<const CallGraph> graph, std::size_t cap)
    : graph_(std::move(graph)), cap_(cap) {
    if (cap_ == 0) {
        throw InvalidArgument("path cap must be at least 1");
    }
}

const std::vector<EdgeIndex>& PathIndex::edges_between(NodeIndex changed, NodeIndex test) {
    const std::uint64_t key = static_cast<std::uint64_t>(changed) << 32 | static_cast<std::uint64_t>(test);
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) {
        return it->second;
    }
    EdgePaths found = enumerate_simple_paths(*graph_, changed, test, cap_);
    if (found.truncated) {
        ++truncated_;
        std::clog << "warning: more than " << cap_ << " simple paths from '" << graph_->node(changed).id
                  << "' to '" << graph_->node(test).id << "'; learning from the first " << cap_ << '\n';
    }
    std::vector<EdgeIndex> edges;
    for (const auto& path : found.paths) {
        edges.insert(edges.end(), path.begin(), path.end());
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return cache_.emplace(key, std::move(edges)).first->second;
}

std::size_t PathIndex::truncated_pairs() const {
    std::lock_guard lock(mutex_);
    return truncated_;
}

namespace {

struct UpdateTarget {
    NodeIndex m;
    NodeIndex t;
};

UpdateTarget resolve(const WeightedCallGraph& w, std::string_view m, std::string_view t) {
    const CallGraph& g = w.graph();
    UpdateTarget target{g.index_of(m), g.index_of(t)};
    if (!g.is_test(target.t)) {
        throw InvalidArgument("'" + std::string(t) + "' is not a test node");
    }
    return target;
}

const std::vector<EdgeIndex>& path_edges(const WeightedCallGraph& w, UpdateTarget target, PathIndex* paths,
                                         std::unique_ptr<PathIndex>& local) {
    if (paths == nullptr) {
        local = std::make_unique<PathIndex>(w.shared_graph());
        paths = local.get();
    } else if (&paths->graph() != &w.graph()) {
        throw InvalidArgument("path index was built for a different graph");
    }
    return paths->edges_between(target.m, target.t);
}

void apply_binary(WeightedCallGraph& w, const std::vector<EdgeIndex>& edges) {
    for (EdgeIndex e : edges) {
        w.set_weight(e, 1.0);
    }
}

void apply_dichotomic(WeightedCallGraph& w, const std::vector<EdgeIndex>& edges, double p) {
    for (EdgeIndex e : edges) {
        w.set_weight(e, (w.weight(e) + p) / 2.0);
    }
}

} // namespace

void update_binary(WeightedCallGraph& w, std::string_view m, std::string_view t, PathIndex* paths) {
    const UpdateTarget target = resolve(w, m, t);
    std::unique_ptr<PathIndex> local;
    apply_binary(w, path_edges(w, target, paths, local));
}

void update_dichotomic(WeightedCallGraph& w, std::string_view m, std::string_view t, double p, PathIndex* paths) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("empirical probability must lie in [0, 1], got " + std::to_string(p));
    }
    const UpdateTarget target = resolve(w, m, t);
    std::unique_ptr<PathIndex> local;
    apply_dichotomic(w, path_edges(w, target, paths, local), p);
}

WeightedCallGraph train(std::shared_ptr<const CallGraph> graph, std::span<const MutationRecord> training,
                        Algorithm algo, PathIndex* paths) {
    WeightedCallGraph w(graph);
    std::unique_ptr<PathIndex> local;
    if (paths == nullptr) {
        local = std::make_unique<PathIndex>(graph);
        paths = local.get();
    } else if (&paths->graph() != graph.get()) {
        throw InvalidArgument("path index was built for a different graph");
    }
    validate_records(*graph, training);

    EmpiricalProbabilityTable table;
    if (algo == Algorithm::Dichotomic && !training.empty()) {
        table = empirical_probabilities(training);
    }
    for (const auto& record : training) {
        const NodeIndex m = graph->index_of(record.m);
        // std::set iterates in ascending id order.
        for (const auto& t : record.ais) {
            const auto& edges = paths->edges_between(m, graph->index_of(t));
            if (algo == Algorithm::Binary) {
                apply_binary(w, edges);
            } else {
                apply_dichotomic(w, edges, table.probability(record.m, t));
            }
        }
    }
    return w;
}

namespace {

constexpr std::string_view kWeightsFormat = "cig-weights";
constexpr int kWeightsVersion = 1;

} // namespace

void save_weights(const WeightedCallGraph& w, std::ostream& out) {
    using nlohmann::ordered_json;

    out << ordered_json{{"format", kWeightsFormat}, {"version", kWeightsVersion}}.dump() << '\n';
    const CallGraph& g = w.graph();
    for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
        ordered_json body{{"caller", g.edge(e).caller}, {"callee", g.edge(e).callee}, {"weight", w.weight(e)}};
        out << ordered_json{{"w", body}}.dump() << '\n';
    }
}

std::string save_weights(const WeightedCallGraph& w) {
    std::ostringstream out;
    save_weights(w, out);
    return out.str();
}

WeightedCallGraph load_weights(std::istream& in, std::shared_ptr<const CallGraph> graph) {
    using nlohmann::json;

    WeightedCallGraph w(graph);
    std::vector<bool> assigned(graph->edge_count(), false);
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
        try {
            if (!seen_header) {
                if (!obj.is_object() || obj.value("format", "") != kWeightsFormat ||
                    obj.value("version", 0) != kWeightsVersion) {
                    throw ParseError("expected header {\"format\":\"cig-weights\",\"version\":1}", line_no);
                }
                seen_header = true;
                continue;
            }
            const auto& body = obj.at("w");
            const std::string caller = body.at("caller").get<std::string>();
            const std::string callee = body.at("callee").get<std::string>();
            const double weight = body.at("weight").get<double>();
            auto e = graph->find_edge(caller, callee);
            if (!e) {
                throw IntegrityError("weight for unknown edge " + caller + " -> " + callee);
            }
            if (assigned[*e]) {
                throw IntegrityError("duplicate weight for edge " + caller + " -> " + callee);
            }
            if (!(weight >= 0.0 && weight <= 1.0)) {
                throw ParseError("weight outside [0, 1]", line_no);
            }
            w.set_weight(*e, weight);
            assigned[*e] = true;
        } catch (const json::exception& e) {
            throw ParseError(std::string("malformed weight record: ") + e.what(), line_no);
        }
    }
    if (!seen_header) {
        throw ParseError("missing cig-weights header", line_no == 0 ? 1 : line_no);
    }
    for (EdgeIndex e = 0; e < assigned.size(); ++e) {
        if (!assigned[e]) {
            throw IntegrityError("no weight for edge " + graph->edge(e).caller + " -> " + graph->edge(e).callee);
        }
    }
    return w;
}

WeightedCallGraph load_weights_file(const std::string& path, std::shared_ptr<const CallGraph> graph) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open weights file '" + path + "'");
    }
    return load_weights(in, std::move(graph));
}

} // namespace impactlab
