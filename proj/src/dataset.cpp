#include "impactlab/dataset.hpp"

#include "impactlab/error.hpp"

#include <json.hpp>

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace impactlab {

namespace {

constexpr std::string_view kDatasetFormat = "cig-mutations";
constexpr int kDatasetVersion = 1;

} // namespace

MutationDataset load_dataset(std::istream& in) {
    using nlohmann::json;

    MutationDataset ds;
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
                if (!obj.is_object() || obj.value("format", "") != kDatasetFormat ||
                    obj.value("version", 0) != kDatasetVersion) {
                    throw ParseError("expected header {\"format\":\"cig-mutations\",\"version\":1,...}", line_no);
                }
                ds.graph_hash = obj.value("graph_hash", "");
                seen_header = true;
                continue;
            }
            const auto& r = obj.at("record");
            MutationRecord rec;
            rec.mutant = r.at("mutant").get<std::string>();
            rec.m = r.at("m").get<std::string>();
            rec.op = r.at("op").get<std::string>();
            for (const auto& t : r.at("ais")) {
                rec.ais.insert(t.get<std::string>());
            }
            ds.records.push_back(std::move(rec));
        } catch (const json::exception& e) {
            throw ParseError(std::string("malformed record: ") + e.what(), line_no);
        }
    }
    if (!seen_header) {
        throw ParseError("missing cig-mutations header", line_no == 0 ? 1 : line_no);
    }
    return ds;
}

MutationDataset load_dataset_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open mutation file '" + path + "'");
    }
    return load_dataset(in);
}

void save_dataset(const MutationDataset& ds, std::ostream& out) {
    using nlohmann::ordered_json;

    out << ordered_json{{"format", kDatasetFormat}, {"version", kDatasetVersion}, {"graph_hash", ds.graph_hash}}.dump()
        << '\n';
    for (const auto& r : ds.records) {
        ordered_json body{{"mutant", r.mutant}, {"m", r.m}, {"op", r.op}, {"ais", r.ais}};
        out << ordered_json{{"record", body}}.dump() << '\n';
    }
}

std::string save_dataset(const MutationDataset& ds) {
    std::ostringstream out;
    save_dataset(ds, out);
    return out.str();
}

void validate_records(const CallGraph& g, std::span<const MutationRecord> records) {
    for (const auto& r : records) {
        auto m = g.find(r.m);
        if (!m) {
            throw IntegrityError("record '" + r.mutant + "' mutates unknown node '" + r.m + "'");
        }
        if (g.is_test(*m)) {
            throw IntegrityError("record '" + r.mutant + "' mutates test node '" + r.m + "'");
        }
        for (const auto& t : r.ais) {
            auto ti = g.find(t);
            if (!ti) {
                throw IntegrityError("record '" + r.mutant + "' lists unknown test '" + t + "'");
            }
            if (!g.is_test(*ti)) {
                throw IntegrityError("record '" + r.mutant + "' lists non-test node '" + t + "' as impacted");
            }
        }
    }
}

} // namespace impactlab
