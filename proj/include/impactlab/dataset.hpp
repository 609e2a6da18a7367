#pragma once

#include "impactlab/callgraph.hpp"

#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace impactlab {

/// One observed change: the mutated method and the tests that failed.
struct MutationRecord {
    std::string mutant;
    NodeId m;
    std::string op;
    std::set<NodeId> ais;

    bool operator==(const MutationRecord&) const = default;
};

/// The set of (mutation point, actual impact set) observations, bound to the
/// graph it was produced against.
struct MutationDataset {
    std::string graph_hash;
    std::vector<MutationRecord> records;

    bool operator==(const MutationDataset&) const = default;
};

// Mutation dataset format (JSON lines, "cig-mutations" version 1).
MutationDataset load_dataset(std::istream& in);
MutationDataset load_dataset_file(const std::string& path);
void save_dataset(const MutationDataset& ds, std::ostream& out);
std::string save_dataset(const MutationDataset& ds);

/// Throws IntegrityError unless every record's m is an application node of
/// `g` and every AIS member is a test node of `g`.
void validate_records(const CallGraph& g, std::span<const MutationRecord> records);

} // namespace impactlab
