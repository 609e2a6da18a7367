#include "impactlab/report.hpp"

#include "impactlab/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace impactlab {

using nlohmann::ordered_json;

std::optional<Format> parse_format(std::string_view text) {
    if (text == "json") {
        return Format::Json;
    }
    if (text == "text") {
        return Format::Text;
    }
    if (text == "csv") {
        return Format::Csv;
    }
    return std::nullopt;
}

namespace {

constexpr std::string_view kTotal = "Total";

std::string fixed(double x, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

ordered_json triple_json(const MetricTriple& m) {
    return {{"precision", m.precision}, {"recall", m.recall}, {"fscore", m.fscore}};
}

struct Cell {
    MetricTriple mean;
    MetricTriple median;
};

struct Row {
    std::string op;
    std::size_t mutants = 0;
    std::vector<Cell> cells; // one per report
};

std::vector<Row> build_rows(std::span<const CrossValReport> reports) {
    std::set<std::string> ops;
    for (const auto& r : reports) {
        for (const auto& s : r.scores) {
            ops.insert(s.op);
        }
    }
    std::vector<std::string> names(ops.begin(), ops.end());
    names.emplace_back(kTotal);

    std::vector<Row> rows;
    for (const auto& name : names) {
        Row row;
        row.op = name;
        std::set<std::size_t> records;
        for (const auto& r : reports) {
            std::vector<MetricTriple> xs;
            for (const auto& s : r.scores) {
                if (name == kTotal || s.op == name) {
                    xs.push_back(s.metrics);
                    records.insert(s.record);
                }
            }
            row.cells.push_back({mean_of(xs), median_of(xs)});
        }
        row.mutants = records.size();
        rows.push_back(std::move(row));
    }
    return rows;
}

struct Comparison {
    Technique technique;
    std::string metric;
    MannWhitneyResult result;
};

std::vector<Comparison> build_comparisons(std::span<const CrossValReport> reports) {
    auto tc = std::find_if(reports.begin(), reports.end(),
                           [](const CrossValReport& r) { return r.technique == Technique::TC; });
    std::vector<Comparison> out;
    if (tc == reports.end() || tc->scores.empty()) {
        return out;
    }
    using Getter = double (*)(const MetricTriple&);
    const std::pair<const char*, Getter> metrics_by_name[] = {
        {"precision", [](const MetricTriple& m) { return m.precision; }},
        {"recall", [](const MetricTriple& m) { return m.recall; }},
        {"fscore", [](const MetricTriple& m) { return m.fscore; }},
    };
    for (const auto& r : reports) {
        if (r.technique == Technique::TC || r.scores.empty()) {
            continue;
        }
        for (const auto& [name, get] : metrics_by_name) {
            std::vector<double> a, b;
            for (const auto& s : r.scores) {
                a.push_back(get(s.metrics));
            }
            for (const auto& s : tc->scores) {
                b.push_back(get(s.metrics));
            }
            out.push_back({r.technique, name, mann_whitney_u(a, b)});
        }
    }
    return out;
}

void check_shared_config(std::span<const CrossValReport> reports) {
    if (reports.empty()) {
        throw InvalidArgument("nothing to report");
    }
    const auto& c = reports.front().config;
    for (const auto& r : reports) {
        if (r.config.folds != c.folds || r.config.repeats != c.repeats || r.config.seed != c.seed ||
            r.threshold != reports.front().threshold) {
            throw InvalidArgument("reports were produced with different settings");
        }
    }
}

std::string evaluation_json(std::span<const CrossValReport> reports, const std::vector<Row>& rows,
                            const std::vector<Comparison>& comparisons) {
    const auto& first = reports.front();
    ordered_json techniques = ordered_json::array();
    for (const auto& r : reports) {
        techniques.push_back(to_string(r.technique));
    }
    ordered_json row_json = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json mean = ordered_json::object();
        ordered_json median = ordered_json::object();
        for (std::size_t i = 0; i < reports.size(); ++i) {
            mean[std::string(to_string(reports[i].technique))] = triple_json(row.cells[i].mean);
            median[std::string(to_string(reports[i].technique))] = triple_json(row.cells[i].median);
        }
        row_json.push_back({{"operator", row.op}, {"mutants", row.mutants}, {"mean", mean}, {"median", median}});
    }
    ordered_json cmp = ordered_json::array();
    for (const auto& c : comparisons) {
        cmp.push_back({{"technique", to_string(c.technique)},
                       {"baseline", "tc"},
                       {"metric", c.metric},
                       {"u", c.result.u},
                       {"p_value", c.result.p_value},
                       {"method", to_string(c.result.method)}});
    }
    ordered_json doc{{"threshold", first.threshold},
                     {"folds", first.config.folds},
                     {"repeats", first.config.repeats},
                     {"seed", first.config.seed},
                     {"techniques", techniques},
                     {"rows", row_json},
                     {"comparisons", cmp}};
    return doc.dump(2) + "\n";
}

/// Left-aligns the first column and right-aligns the rest.
std::string align(const std::vector<std::vector<std::string>>& table) {
    std::vector<std::size_t> width;
    for (const auto& line : table) {
        width.resize(std::max(width.size(), line.size()), 0);
        for (std::size_t i = 0; i < line.size(); ++i) {
            width[i] = std::max(width[i], line[i].size());
        }
    }
    std::ostringstream out;
    for (const auto& line : table) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (i > 0) {
                out << "  " << std::right;
            } else {
                out << std::left;
            }
            out << std::setw(static_cast<int>(width[i])) << line[i];
        }
        out << '\n';
    }
    return out.str();
}

std::string evaluation_text(std::span<const CrossValReport> reports, const std::vector<Row>& rows,
                            const std::vector<Comparison>& comparisons) {
    const auto& first = reports.front();
    std::ostringstream out;
    out << "threshold " << fixed(first.threshold, 2) << ", " << first.config.folds << " folds x "
        << first.config.repeats << " repeats, seed " << first.config.seed << "\n";
    for (const bool use_mean : {true, false}) {
        out << '\n' << (use_mean ? "mean" : "median") << '\n';
        std::vector<std::vector<std::string>> table;
        std::vector<std::string> header{"operator", "#mut"};
        for (const auto& r : reports) {
            const std::string t(to_string(r.technique));
            header.insert(header.end(), {t + ".P", t + ".R", t + ".F"});
        }
        table.push_back(header);
        for (const auto& row : rows) {
            std::vector<std::string> line{row.op, std::to_string(row.mutants)};
            for (const auto& cell : row.cells) {
                const MetricTriple& m = use_mean ? cell.mean : cell.median;
                line.insert(line.end(), {fixed(m.precision), fixed(m.recall), fixed(m.fscore)});
            }
            table.push_back(std::move(line));
        }
        out << align(table);
    }
    if (!comparisons.empty()) {
        out << "\nMann-Whitney U against tc\n";
        std::vector<std::vector<std::string>> table{{"technique", "metric", "U", "p", "method"}};
        for (const auto& c : comparisons) {
            table.push_back({std::string(to_string(c.technique)), c.metric, fixed(c.result.u, 1),
                             fixed(c.result.p_value, 6), std::string(to_string(c.result.method))});
        }
        out << align(table);
    }
    return out.str();
}

std::string evaluation_csv(std::span<const CrossValReport> reports, const std::vector<Row>& rows) {
    std::ostringstream out;
    out << "statistic,operator,mutants,technique,precision,recall,fscore\n";
    for (const bool use_mean : {true, false}) {
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < reports.size(); ++i) {
                const MetricTriple& m = use_mean ? row.cells[i].mean : row.cells[i].median;
                out << (use_mean ? "mean" : "median") << ',' << row.op << ',' << row.mutants << ','
                    << to_string(reports[i].technique) << ',' << fixed(m.precision, 6) << ','
                    << fixed(m.recall, 6) << ',' << fixed(m.fscore, 6) << '\n';
            }
        }
    }
    return out.str();
}

} // namespace

std::string render_evaluation(std::span<const CrossValReport> reports, Format format) {
    check_shared_config(reports);
    const auto rows = build_rows(reports);
    switch (format) {
    case Format::Json: return evaluation_json(reports, rows, build_comparisons(reports));
    case Format::Text: return evaluation_text(reports, rows, build_comparisons(reports));
    case Format::Csv: return evaluation_csv(reports, rows);
    }
    return {};
}

std::string render_sweep(Technique technique, const CvConfig& config, std::span<const SweepPoint> points,
                         Format format) {
    switch (format) {
    case Format::Json: {
        ordered_json pts = ordered_json::array();
        for (const auto& p : points) {
            pts.push_back({{"threshold", p.threshold}, {"mean", triple_json(p.mean)}, {"median", triple_json(p.median)}});
        }
        ordered_json doc{{"technique", to_string(technique)},
                         {"folds", config.folds},
                         {"repeats", config.repeats},
                         {"seed", config.seed},
                         {"points", pts}};
        return doc.dump(2) + "\n";
    }
    case Format::Text: {
        std::vector<std::vector<std::string>> table{
            {"threshold", "mean.P", "mean.R", "mean.F", "median.P", "median.R", "median.F"}};
        for (const auto& p : points) {
            table.push_back({fixed(p.threshold, 2), fixed(p.mean.precision), fixed(p.mean.recall),
                             fixed(p.mean.fscore), fixed(p.median.precision), fixed(p.median.recall),
                             fixed(p.median.fscore)});
        }
        return std::string(to_string(technique)) + ", " + std::to_string(config.folds) + " folds x " +
               std::to_string(config.repeats) + " repeats, seed " + std::to_string(config.seed) + "\n" +
               align(table);
    }
    case Format::Csv: {
        std::ostringstream out;
        out << "threshold,statistic,precision,recall,fscore\n";
        for (const auto& p : points) {
            out << fixed(p.threshold, 6) << ",mean," << fixed(p.mean.precision, 6) << ','
                << fixed(p.mean.recall, 6) << ',' << fixed(p.mean.fscore, 6) << '\n';
            out << fixed(p.threshold, 6) << ",median," << fixed(p.median.precision, 6) << ','
                << fixed(p.median.recall, 6) << ',' << fixed(p.median.fscore, 6) << '\n';
        }
        return out.str();
    }
    }
    return {};
}

std::string render_histogram(std::span<const HistogramBin> bins, Format format) {
    switch (format) {
    case Format::Json: {
        ordered_json out = ordered_json::array();
        for (const auto& b : bins) {
            out.push_back(
                {{"lower", b.lower}, {"upper", b.upper}, {"count", b.count}, {"percentage", b.percentage}});
        }
        return ordered_json{{"bins", out}}.dump(2) + "\n";
    }
    case Format::Text: {
        std::vector<std::vector<std::string>> table{{"range", "count", "percent"}};
        for (std::size_t i = 0; i < bins.size(); ++i) {
            const char close = i + 1 == bins.size() ? ']' : ')';
            table.push_back({"[" + fixed(bins[i].lower, 2) + ", " + fixed(bins[i].upper, 2) + close,
                             std::to_string(bins[i].count), fixed(bins[i].percentage, 2)});
        }
        return align(table);
    }
    case Format::Csv: {
        std::ostringstream out;
        out << "lower,upper,count,percentage\n";
        for (const auto& b : bins) {
            out << fixed(b.lower, 6) << ',' << fixed(b.upper, 6) << ',' << b.count << ',' << fixed(b.percentage, 6)
                << '\n';
        }
        return out.str();
    }
    }
    return {};
}

} // namespace impactlab
