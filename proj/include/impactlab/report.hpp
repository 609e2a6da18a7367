#pragma once

#include "impactlab/evaluation.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace impactlab {

enum class Format { Json, Text, Csv };

std::optional<Format> parse_format(std::string_view text);

/// Per-operator table of every technique's scores, plus a "Total" row pooled
/// over all mutants. Both the mean and the median of each metric are given.
/// When TC is among the reports, each learned technique is compared to it
/// with a Mann-Whitney U test per metric. All reports must share a config.
std::string render_evaluation(std::span<const CrossValReport> reports, Format format);

std::string render_sweep(Technique technique, const CvConfig& config, std::span<const SweepPoint> points,
                         Format format);

std::string render_histogram(std::span<const HistogramBin> bins, Format format);

} // namespace impactlab
