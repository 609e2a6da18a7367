#include "impactlab/evaluation.hpp"

#include "impactlab/error.hpp"
#include "impactlab/prediction.hpp"
#include "impactlab/random.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iterator>
#include <mutex>
#include <numeric>
#include <thread>

namespace impactlab {

std::string_view to_string(Technique t) {
    switch (t) {
    case Technique::TC: return "tc";
    case Technique::Binary: return "binary";
    case Technique::Dichotomic: return "dichotomic";
    }
    return "?";
}

std::optional<Technique> parse_technique(std::string_view text) {
    for (Technique t : {Technique::TC, Technique::Binary, Technique::Dichotomic}) {
        if (to_string(t) == text) {
            return t;
        }
    }
    return std::nullopt;
}

std::string_view to_string(PValueMethod m) {
    return m == PValueMethod::Exact ? "exact" : "normal";
}

BohnerSets bohner_sets(const std::set<NodeId>& sis, const std::set<NodeId>& ais, const std::set<NodeId>& cis) {
    auto require_subset = [&](const std::set<NodeId>& s, std::string_view name) {
        for (const auto& x : s) {
            if (!sis.contains(x)) {
                throw InvalidArgument(std::string(name) + " member '" + x + "' is not in the starting impact set");
            }
        }
    };
    require_subset(ais, "AIS");
    require_subset(cis, "CIS");

    BohnerSets out{sis, cis, ais, {}, {}};
    std::set_difference(ais.begin(), ais.end(), cis.begin(), cis.end(), std::inserter(out.dis, out.dis.end()));
    std::set_difference(cis.begin(), cis.end(), ais.begin(), ais.end(), std::inserter(out.fpis, out.fpis.end()));
    return out;
}

MetricTriple metrics(const std::set<NodeId>& ais, const std::set<NodeId>& cis) {
    std::size_t hits = 0;
    for (const auto& t : cis) {
        hits += ais.contains(t) ? 1 : 0;
    }
    MetricTriple m;
    if (cis.empty()) {
        m.precision = ais.empty() ? 1.0 : 0.0;
    } else {
        m.precision = static_cast<double>(hits) / static_cast<double>(cis.size());
    }
    if (ais.empty()) {
        m.recall = cis.empty() ? 1.0 : 0.0;
    } else {
        m.recall = static_cast<double>(hits) / static_cast<double>(ais.size());
    }
    const double sum = m.precision + m.recall;
    m.fscore = sum == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / sum;
    return m;
}

MetricTriple mean_of(std::span<const MetricTriple> xs) {
    MetricTriple out;
    if (xs.empty()) {
        return out;
    }
    for (const auto& x : xs) {
        out.precision += x.precision;
        out.recall += x.recall;
        out.fscore += x.fscore;
    }
    const auto n = static_cast<double>(xs.size());
    out.precision /= n;
    out.recall /= n;
    out.fscore /= n;
    return out;
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) {
        return 0.0;
    }
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : (v[mid - 1] + v[mid]) / 2.0;
}

} // namespace

MetricTriple median_of(std::span<const MetricTriple> xs) {
    std::vector<double> p, r, f;
    for (const auto& x : xs) {
        p.push_back(x.precision);
        r.push_back(x.recall);
        f.push_back(x.fscore);
    }
    return {median(std::move(p)), median(std::move(r)), median(std::move(f))};
}

std::vector<std::vector<std::vector<std::size_t>>> plan_folds(std::size_t n, std::size_t folds, std::size_t repeats,
                                                              std::uint64_t seed) {
    if (folds == 0) {
        throw InvalidArgument("fold count must be positive");
    }
    Rng rng(seed);
    std::vector<std::vector<std::vector<std::size_t>>> plan(repeats);
    for (auto& repeat : plan) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        rng.shuffle(std::span<std::size_t>(order));
        repeat.resize(folds);
        for (std::size_t f = 0; f < folds; ++f) {
            repeat[f].assign(order.begin() + static_cast<std::ptrdiff_t>(f * n / folds),
                             order.begin() + static_cast<std::ptrdiff_t>((f + 1) * n / folds));
        }
    }
    return plan;
}

namespace {

/// Runs `task(i)` for i in [0, count) on up to `jobs` threads.
template <typename Task>
void run_tasks(std::size_t count, std::size_t jobs, Task&& task) {
    jobs = std::max<std::size_t>(1, std::min(jobs, count));
    if (jobs == 1) {
        for (std::size_t i = 0; i < count; ++i) {
            task(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    {
        std::vector<std::jthread> workers;
        for (std::size_t j = 0; j < jobs; ++j) {
            workers.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        task(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) {
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

CrossValReport summarize(Technique technique, double threshold, const CvConfig& config,
                         std::vector<MutantScore> scores) {
    CrossValReport report;
    report.technique = technique;
    report.threshold = threshold;
    report.config = config;
    report.scores = std::move(scores);

    std::vector<MetricTriple> all;
    std::map<std::string, std::vector<MetricTriple>> by_op;
    for (const auto& s : report.scores) {
        all.push_back(s.metrics);
        by_op[s.op].push_back(s.metrics);
    }
    report.mean = mean_of(all);
    report.median = median_of(all);
    for (const auto& [op, xs] : by_op) {
        report.mean_by_operator[op] = mean_of(xs);
    }
    return report;
}

} // namespace

std::vector<CrossValReport> cross_validate_thresholds(std::shared_ptr<const CallGraph> g,
                                                      std::span<const MutationRecord> ds, Technique technique,
                                                      std::span<const double> thresholds, const CvConfig& config,
                                                      PathIndex* paths) {
    if (thresholds.empty()) {
        throw InvalidArgument("at least one threshold is required");
    }
    for (double th : thresholds) {
        if (!(th >= 0.0 && th <= 1.0)) {
            throw InvalidArgument("threshold must lie in [0, 1], got " + std::to_string(th));
        }
    }
    if (config.folds < 2) {
        throw InvalidArgument("cross-validation needs at least 2 folds");
    }
    if (config.repeats == 0) {
        throw InvalidArgument("cross-validation needs at least 1 repeat");
    }
    if (ds.size() < config.folds) {
        throw InvalidArgument("dataset has " + std::to_string(ds.size()) + " records, fewer than " +
                              std::to_string(config.folds) + " folds");
    }
    validate_records(*g, ds);

    std::unique_ptr<PathIndex> local;
    if (technique != Technique::TC && paths == nullptr) {
        local = std::make_unique<PathIndex>(g);
        paths = local.get();
    }

    const auto plan = plan_folds(ds.size(), config.folds, config.repeats, config.seed);
    const std::size_t tasks = config.repeats * config.folds;
    // results[task][threshold] -> scores of that fold
    std::vector<std::vector<std::vector<MutantScore>>> results(tasks);

    run_tasks(tasks, config.jobs, [&](std::size_t task) {
        const std::size_t r = task / config.folds;
        const std::size_t f = task % config.folds;

        std::optional<WeightedCallGraph> weights;
        if (technique != Technique::TC) {
            std::vector<MutationRecord> training;
            training.reserve(ds.size());
            for (std::size_t other = 0; other < config.folds; ++other) {
                if (other == f) {
                    continue;
                }
                for (std::size_t idx : plan[r][other]) {
                    training.push_back(ds[idx]);
                }
            }
            const Algorithm algo = technique == Technique::Binary ? Algorithm::Binary : Algorithm::Dichotomic;
            weights = train(g, training, algo, paths);
        }

        auto& out = results[task];
        out.resize(thresholds.size());
        for (std::size_t idx : plan[r][f]) {
            const MutationRecord& rec = ds[idx];
            std::optional<Prediction> tc;
            if (technique == Technique::TC) {
                tc = predict_tc(*g, rec.m);
            }
            for (std::size_t k = 0; k < thresholds.size(); ++k) {
                const std::set<NodeId>& cis = tc ? tc->cis : predict(*weights, rec.m, thresholds[k]).cis;
                out[k].push_back({r, f, idx, rec.mutant, rec.op, metrics(rec.ais, cis)});
            }
        }
    });

    std::vector<CrossValReport> reports;
    for (std::size_t k = 0; k < thresholds.size(); ++k) {
        std::vector<MutantScore> scores;
        for (auto& task : results) {
            scores.insert(scores.end(), task[k].begin(), task[k].end());
        }
        reports.push_back(summarize(technique, thresholds[k], config, std::move(scores)));
    }
    return reports;
}

CrossValReport cross_validate(std::shared_ptr<const CallGraph> g, std::span<const MutationRecord> ds,
                              Technique technique, double threshold, const CvConfig& config, PathIndex* paths) {
    const double th[] = {threshold};
    return std::move(cross_validate_thresholds(std::move(g), ds, technique, th, config, paths).front());
}

std::vector<SweepPoint> threshold_sweep(std::shared_ptr<const CallGraph> g, std::span<const MutationRecord> ds,
                                        Technique technique, std::span<const double> thresholds,
                                        const CvConfig& config, PathIndex* paths) {
    std::vector<SweepPoint> out;
    for (const auto& report : cross_validate_thresholds(std::move(g), ds, technique, thresholds, config, paths)) {
        out.push_back({report.threshold, report.mean, report.median});
    }
    return out;
}

std::vector<HistogramBin> weight_histogram(std::span<const double> weights, std::size_t bins) {
    if (bins == 0) {
        throw InvalidArgument("histogram needs at least one bin");
    }
    const auto edge = [bins](std::size_t k) { return static_cast<double>(k) / static_cast<double>(bins); };
    std::vector<HistogramBin> out(bins);
    for (std::size_t k = 0; k < bins; ++k) {
        out[k].lower = edge(k);
        out[k].upper = edge(k + 1);
    }
    for (double w : weights) {
        auto k = static_cast<std::size_t>(std::clamp(std::floor(w * static_cast<double>(bins)), 0.0,
                                                     static_cast<double>(bins - 1)));
        // w * bins can round across a boundary; settle against exact edges.
        while (k + 1 < bins && w >= edge(k + 1)) {
            ++k;
        }
        while (k > 0 && w < edge(k)) {
            --k;
        }
        ++out[k].count;
    }
    if (!weights.empty()) {
        for (auto& b : out) {
            b.percentage = 100.0 * static_cast<double>(b.count) / static_cast<double>(weights.size());
        }
    }
    return out;
}

std::vector<HistogramBin> weight_histogram(const WeightedCallGraph& w, std::size_t bins) {
    return weight_histogram(w.weights(), bins);
}

namespace {

/// Midranks of the pooled sample, doubled so that they are integers.
std::vector<long long> doubled_midranks(const std::vector<double>& pooled) {
    std::vector<std::size_t> order(pooled.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return pooled[x] < pooled[y]; });
    std::vector<long long> ranks(pooled.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) {
            ++j;
        }
        // Ranks i+1..j+1 share their average; doubled: (i+1)+(j+1).
        const auto rank2 = static_cast<long long>(i + j + 2);
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = rank2;
        }
        i = j + 1;
    }
    return ranks;
}

/// Exact two-sided p: share of all size-k subsets of the pooled ranks whose
/// rank sum deviates from its mean at least as much as the observed one.
double exact_p_value(const std::vector<long long>& ranks2, std::size_t k, long long observed_sum2) {
    const std::size_t n = ranks2.size();
    const long long max_sum = std::accumulate(ranks2.begin(), ranks2.end(), 0LL);
    // count[j][s]: subsets of size j with doubled rank sum s.
    std::vector<std::vector<double>> count(k + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
    count[0][0] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = static_cast<std::size_t>(ranks2[i]);
        for (std::size_t j = std::min(k, i + 1); j >= 1; --j) {
            for (std::size_t s = static_cast<std::size_t>(max_sum); s >= r; --s) {
                count[j][s] += count[j - 1][s - r];
            }
        }
    }
    // Mean doubled rank sum is k(n+1).
    const long long mean2 = static_cast<long long>(k * (n + 1));
    const long long observed_dev = std::llabs(observed_sum2 - mean2);
    double extreme = 0.0;
    double total = 0.0;
    for (std::size_t s = 0; s <= static_cast<std::size_t>(max_sum); ++s) {
        total += count[k][s];
        if (std::llabs(static_cast<long long>(s) - mean2) >= observed_dev) {
            extreme += count[k][s];
        }
    }
    return std::min(1.0, extreme / total);
}

} // namespace

MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw InvalidArgument("Mann-Whitney U needs two nonempty samples");
    }
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const std::vector<long long> ranks2 = doubled_midranks(pooled);

    const long long sum2_a = std::accumulate(ranks2.begin(), ranks2.begin() + static_cast<std::ptrdiff_t>(na), 0LL);
    MannWhitneyResult out;
    out.u = static_cast<double>(sum2_a) / 2.0 - static_cast<double>(na * (na + 1)) / 2.0;

    if (std::min(na, nb) < kMannWhitneyExactBelow) {
        out.method = PValueMethod::Exact;
        // Enumerate subsets of the smaller side; the two-sided p is the same.
        if (na <= nb) {
            out.p_value = exact_p_value(ranks2, na, sum2_a);
        } else {
            const long long sum2_b = std::accumulate(ranks2.begin(), ranks2.end(), 0LL) - sum2_a;
            std::vector<long long> reordered(ranks2.begin() + static_cast<std::ptrdiff_t>(na), ranks2.end());
            reordered.insert(reordered.end(), ranks2.begin(), ranks2.begin() + static_cast<std::ptrdiff_t>(na));
            out.p_value = exact_p_value(reordered, nb, sum2_b);
        }
        return out;
    }

    out.method = PValueMethod::Normal;
    const double n = static_cast<double>(na + nb);
    const double mean = static_cast<double>(na) * static_cast<double>(nb) / 2.0;
    // Tie correction: sum of t^3 - t over tie groups.
    std::vector<long long> sorted = ranks2;
    std::sort(sorted.begin(), sorted.end());
    double ties = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) {
            ++j;
        }
        const auto t = static_cast<double>(j - i);
        ties += t * t * t - t;
        i = j;
    }
    const double variance =
        static_cast<double>(na) * static_cast<double>(nb) / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    if (variance <= 0.0) {
        out.p_value = 1.0;
        return out;
    }
    const double z = std::max(0.0, std::fabs(out.u - mean) - 0.5) / std::sqrt(variance);
    out.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
    return out;
}

} // namespace impactlab
