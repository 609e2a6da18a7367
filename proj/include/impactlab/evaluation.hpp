#pragma once

#include "impactlab/callgraph.hpp"
#include "impactlab/dataset.hpp"
#include "impactlab/learning.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace impactlab {

/// Impact prediction technique under evaluation.
enum class Technique { TC, Binary, Dichotomic };

std::string_view to_string(Technique t);
std::optional<Technique> parse_technique(std::string_view text);

/// Starting, candidate, actual, discovered (missed) and false-positive
/// impact sets of one change.
struct BohnerSets {
    std::set<NodeId> sis;
    std::set<NodeId> cis;
    std::set<NodeId> ais;
    std::set<NodeId> dis;
    std::set<NodeId> fpis;
};

/// Throws InvalidArgument unless ais and cis are subsets of sis.
BohnerSets bohner_sets(const std::set<NodeId>& sis, const std::set<NodeId>& ais, const std::set<NodeId>& cis);

struct MetricTriple {
    double precision = 0.0;
    double recall = 0.0;
    double fscore = 0.0;

    bool operator==(const MetricTriple&) const = default;
};

/// Precision |AIS∩CIS|/|CIS|, recall |AIS∩CIS|/|AIS| and their harmonic
/// mean. An empty CIS has precision 1 only if the AIS is empty too; an
/// empty AIS has recall 1 only if the CIS is empty too. F is 0 when P+R = 0.
MetricTriple metrics(const std::set<NodeId>& ais, const std::set<NodeId>& cis);

struct CvConfig {
    std::size_t folds = 10;
    std::size_t repeats = 10;
    std::uint64_t seed = 0;
    /// Worker threads; results do not depend on it.
    std::size_t jobs = 1;
};

/// Record indices per [repeat][fold]. Each repeat shuffles the dataset with
/// a generator seeded once from `seed`, then cuts it into contiguous folds
/// whose sizes differ by at most one.
std::vector<std::vector<std::vector<std::size_t>>> plan_folds(std::size_t n, std::size_t folds, std::size_t repeats,
                                                              std::uint64_t seed);

struct MutantScore {
    std::size_t repeat = 0;
    std::size_t fold = 0;
    std::size_t record = 0; // index into the evaluated dataset
    std::string mutant;
    std::string op;
    MetricTriple metrics;
};

struct CrossValReport {
    Technique technique = Technique::TC;
    double threshold = 0.0;
    CvConfig config;
    /// Ordered by repeat, fold, then position within the fold.
    std::vector<MutantScore> scores;
    /// Unweighted mean and per-metric median over every (repeat, fold, mutant).
    MetricTriple mean;
    MetricTriple median;
    std::map<std::string, MetricTriple> mean_by_operator;
};

/// Trains on all folds but one and scores each held-out mutant, for every
/// fold of every repeat. Throws InvalidArgument when the dataset has fewer
/// records than folds. `paths` may be shared between calls on one graph.
CrossValReport cross_validate(std::shared_ptr<const CallGraph> g, std::span<const MutationRecord> ds,
                              Technique technique, double threshold, const CvConfig& config,
                              PathIndex* paths = nullptr);

struct SweepPoint {
    double threshold = 0.0;
    MetricTriple mean;
    MetricTriple median;
};

/// Cross-validates once per threshold on identical folds. Entries follow the
/// order of `thresholds`.
std::vector<SweepPoint> threshold_sweep(std::shared_ptr<const CallGraph> g, std::span<const MutationRecord> ds,
                                        Technique technique, std::span<const double> thresholds,
                                        const CvConfig& config, PathIndex* paths = nullptr);

/// Full per-threshold reports, sharing one training per fold.
std::vector<CrossValReport> cross_validate_thresholds(std::shared_ptr<const CallGraph> g,
                                                      std::span<const MutationRecord> ds, Technique technique,
                                                      std::span<const double> thresholds, const CvConfig& config,
                                                      PathIndex* paths = nullptr);

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
    double percentage = 0.0;
};

/// Bins are [k/bins, (k+1)/bins); the last bin also holds 1.0.
std::vector<HistogramBin> weight_histogram(std::span<const double> weights, std::size_t bins = 10);
std::vector<HistogramBin> weight_histogram(const WeightedCallGraph& w, std::size_t bins = 10);

enum class PValueMethod { Exact, Normal };

std::string_view to_string(PValueMethod m);

struct MannWhitneyResult {
    /// U of the first sample: pairs (x in a, y in b) with x > y, ties as 1/2.
    double u = 0.0;
    double p_value = 1.0;
    PValueMethod method = PValueMethod::Exact;
};

/// Below this smaller-sample size the p-value is exact.
inline constexpr std::size_t kMannWhitneyExactBelow = 8;

/// Two-sided Mann-Whitney U test with midranks for ties. Exact permutation
/// p-value when min(|a|, |b|) < 8, otherwise the normal approximation with
/// tie and continuity corrections.
MannWhitneyResult mann_whitney_u(std::span<const double> a, std::span<const double> b);

MetricTriple mean_of(std::span<const MetricTriple> xs);
MetricTriple median_of(std::span<const MetricTriple> xs);

} // namespace impactlab
