#pragma once

#include "impactlab/callgraph.hpp"
#include "impactlab/dataset.hpp"
#include "impactlab/minilang/analysis.hpp"
#include "impactlab/minilang/ast.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace impactlab {

/// The five classic first-order mutation operators.
enum class Operator { ABS, AOR, LCR, ROR, UOI };

inline constexpr std::array<Operator, 5> kAllOperators{Operator::ABS, Operator::AOR, Operator::LCR,
                                                       Operator::ROR, Operator::UOI};

std::string_view to_string(Operator op);
std::optional<Operator> parse_operator(std::string_view text);

/// The concrete rewrite applied at a site.
enum class Variant {
    AbsValue,
    ArithAdd,
    ArithSub,
    ArithMul,
    ArithDiv,
    ArithMod,
    KeepLeft,
    KeepRight,
    LogicAnd,
    LogicOr,
    ConstTrue,
    ConstFalse,
    RelLt,
    RelLe,
    RelGt,
    RelGe,
    RelEq,
    RelNe,
    Negate,
    Increment,
    Decrement,
    Complement,
};

/// Stable short tag used in mutant ids ("add", "left", "true", "neg", ...).
std::string_view tag(Variant v);

struct MutationSite {
    std::string function;
    std::size_t location = 0; // preorder index within the function body
    Operator op = Operator::ABS;
    Variant variant = Variant::AbsValue;

    bool operator==(const MutationSite&) const = default;
};

/// "<function>@<location>:<OP>:<tag>", e.g. "mul@0:AOR:add".
std::string mutant_id(const MutationSite& site);

struct Mutant {
    std::string id;
    std::string base_hash;
    MutationSite site;
    minilang::Program program;
};

/// Every legal (location, variant) for `op` in application functions, in
/// source order. Variants that would reproduce the original expression are
/// left out.
std::vector<MutationSite> enumerate_sites(const minilang::Program& program, Operator op);

/// Rewrites exactly one node. Throws InvalidArgument if the site does not
/// exist or the operator does not apply there.
minilang::Program apply_mutation(const minilang::Program& program, const MutationSite& site);

/// SHA-256 of the canonical printed program.
std::string program_hash(const minilang::Program& program);

struct MutantSample {
    std::vector<Mutant> mutants;
    std::size_t population = 0;
    /// True when fewer sites exist than were requested.
    bool exhausted = false;
};

/// Draws min(n, population) distinct sites uniformly without replacement.
/// The result is listed in source order and depends only on the arguments.
MutantSample sample_mutants(const minilang::Program& program, Operator op, std::size_t n, std::uint64_t seed);

/// Throws BaselineError listing the failing tests when `program` is not green.
void require_green_baseline(const minilang::Program& program, const minilang::RunOptions& options = {});

/// Runs the suite on the mutant and records which tests fail. Assumes the
/// base program passes all its tests. Throws IntegrityError if the mutated
/// function (or a failing test) has no matching node in `g`.
MutationRecord compute_record(const minilang::Program& base, const Mutant& mutant, const CallGraph& g,
                              const minilang::RunOptions& options = {});

} // namespace impactlab
