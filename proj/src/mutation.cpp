#include "impactlab/mutation.hpp"

#include "impactlab/digest.hpp"
#include "impactlab/error.hpp"
#include "impactlab/minilang/syntax.hpp"
#include "impactlab/random.hpp"

#include <algorithm>
#include <numeric>

namespace impactlab {

using minilang::ArithOp;
using minilang::Expr;
using minilang::ExprKind;
using minilang::ExprPtr;
using minilang::LogicOp;
using minilang::Program;
using minilang::RelOp;

std::string_view to_string(Operator op) {
    switch (op) {
    case Operator::ABS: return "ABS";
    case Operator::AOR: return "AOR";
    case Operator::LCR: return "LCR";
    case Operator::ROR: return "ROR";
    case Operator::UOI: return "UOI";
    }
    return "?";
}

std::optional<Operator> parse_operator(std::string_view text) {
    for (Operator op : kAllOperators) {
        if (to_string(op) == text) {
            return op;
        }
    }
    return std::nullopt;
}

std::string_view tag(Variant v) {
    switch (v) {
    case Variant::AbsValue: return "abs";
    case Variant::ArithAdd: return "add";
    case Variant::ArithSub: return "sub";
    case Variant::ArithMul: return "mul";
    case Variant::ArithDiv: return "div";
    case Variant::ArithMod: return "mod";
    case Variant::KeepLeft: return "left";
    case Variant::KeepRight: return "right";
    case Variant::LogicAnd: return "and";
    case Variant::LogicOr: return "or";
    case Variant::ConstTrue: return "true";
    case Variant::ConstFalse: return "false";
    case Variant::RelLt: return "lt";
    case Variant::RelLe: return "le";
    case Variant::RelGt: return "gt";
    case Variant::RelGe: return "ge";
    case Variant::RelEq: return "eq";
    case Variant::RelNe: return "ne";
    case Variant::Negate: return "neg";
    case Variant::Increment: return "inc";
    case Variant::Decrement: return "dec";
    case Variant::Complement: return "not";
    }
    return "?";
}

std::string mutant_id(const MutationSite& site) {
    return site.function + "@" + std::to_string(site.location) + ":" + std::string(to_string(site.op)) + ":" +
           std::string(tag(site.variant));
}

namespace {

// Expressions whose value is used as a number: literals, variables, calls
// and arithmetic.
bool is_numeric(const Expr& e) {
    switch (e.kind) {
    case ExprKind::IntLit:
    case ExprKind::Var:
    case ExprKind::Arith:
    case ExprKind::Neg:
    case ExprKind::Abs:
    case ExprKind::Call:
    case ExprKind::VCall:
        return true;
    default:
        return false;
    }
}

bool is_boolean(const Expr& e) {
    switch (e.kind) {
    case ExprKind::BoolLit:
    case ExprKind::Rel:
    case ExprKind::Logic:
    case ExprKind::Not:
        return true;
    default:
        return false;
    }
}

constexpr std::array<std::pair<ArithOp, Variant>, 5> kArithVariants{{
    {ArithOp::Add, Variant::ArithAdd},
    {ArithOp::Sub, Variant::ArithSub},
    {ArithOp::Mul, Variant::ArithMul},
    {ArithOp::Div, Variant::ArithDiv},
    {ArithOp::Mod, Variant::ArithMod},
}};

constexpr std::array<std::pair<RelOp, Variant>, 6> kRelVariants{{
    {RelOp::Lt, Variant::RelLt},
    {RelOp::Le, Variant::RelLe},
    {RelOp::Gt, Variant::RelGt},
    {RelOp::Ge, Variant::RelGe},
    {RelOp::Eq, Variant::RelEq},
    {RelOp::Ne, Variant::RelNe},
}};

std::vector<Variant> candidate_variants(const Expr& e, Operator op) {
    std::vector<Variant> out;
    switch (op) {
    case Operator::ABS:
        if (is_numeric(e)) {
            out.push_back(Variant::AbsValue);
        }
        break;
    case Operator::AOR:
        if (e.kind == ExprKind::Arith) {
            for (auto [aop, v] : kArithVariants) {
                if (aop != e.arith) {
                    out.push_back(v);
                }
            }
            out.push_back(Variant::KeepLeft);
            out.push_back(Variant::KeepRight);
        }
        break;
    case Operator::LCR:
        if (e.kind == ExprKind::Logic) {
            out.push_back(e.logic == LogicOp::And ? Variant::LogicOr : Variant::LogicAnd);
            out.push_back(Variant::ConstTrue);
            out.push_back(Variant::ConstFalse);
            out.push_back(Variant::KeepLeft);
            out.push_back(Variant::KeepRight);
        }
        break;
    case Operator::ROR:
        if (e.kind == ExprKind::Rel) {
            for (auto [rop, v] : kRelVariants) {
                if (rop != e.rel) {
                    out.push_back(v);
                }
            }
            out.push_back(Variant::ConstTrue);
            out.push_back(Variant::ConstFalse);
        }
        break;
    case Operator::UOI:
        if (is_numeric(e)) {
            out.push_back(Variant::Negate);
            out.push_back(Variant::Increment);
            out.push_back(Variant::Decrement);
        } else if (is_boolean(e)) {
            out.push_back(Variant::Complement);
        }
        break;
    }
    return out;
}

/// Replacement node for `variant` at `e`, or nullptr if it does not apply.
ExprPtr rewrite(const ExprPtr& e, Operator op, Variant variant) {
    const auto applicable = candidate_variants(*e, op);
    if (std::find(applicable.begin(), applicable.end(), variant) == applicable.end()) {
        return nullptr;
    }
    const auto pos = e->pos;
    switch (variant) {
    case Variant::AbsValue: return minilang::abs_(e, pos);
    case Variant::ArithAdd:
    case Variant::ArithSub:
    case Variant::ArithMul:
    case Variant::ArithDiv:
    case Variant::ArithMod:
        for (auto [aop, v] : kArithVariants) {
            if (v == variant) {
                return minilang::arith(aop, e->children[0], e->children[1], pos);
            }
        }
        return nullptr;
    case Variant::KeepLeft: return e->children[0];
    case Variant::KeepRight: return e->children[1];
    case Variant::LogicAnd: return minilang::logic(LogicOp::And, e->children[0], e->children[1], pos);
    case Variant::LogicOr: return minilang::logic(LogicOp::Or, e->children[0], e->children[1], pos);
    case Variant::ConstTrue: return minilang::bool_lit(true, pos);
    case Variant::ConstFalse: return minilang::bool_lit(false, pos);
    case Variant::RelLt:
    case Variant::RelLe:
    case Variant::RelGt:
    case Variant::RelGe:
    case Variant::RelEq:
    case Variant::RelNe:
        for (auto [rop, v] : kRelVariants) {
            if (v == variant) {
                return minilang::rel(rop, e->children[0], e->children[1], pos);
            }
        }
        return nullptr;
    case Variant::Negate: return minilang::neg(e, pos);
    case Variant::Increment: return minilang::arith(ArithOp::Add, e, minilang::int_lit(1, pos), pos);
    case Variant::Decrement: return minilang::arith(ArithOp::Sub, e, minilang::int_lit(1, pos), pos);
    case Variant::Complement: return minilang::not_(e, pos);
    }
    return nullptr;
}

} // namespace

std::vector<MutationSite> enumerate_sites(const Program& program, Operator op) {
    std::vector<MutationSite> sites;
    for (const auto& fn : program.functions) {
        if (fn.kind != NodeKind::Application) {
            continue;
        }
        minilang::for_each_preorder(fn.body, [&](std::size_t index, const ExprPtr& node) {
            for (Variant v : candidate_variants(*node, op)) {
                ExprPtr replacement = rewrite(node, op, v);
                if (replacement && !minilang::equal(*replacement, *node)) {
                    sites.push_back({fn.name, index, op, v});
                }
            }
        });
    }
    return sites;
}

Program apply_mutation(const Program& program, const MutationSite& site) {
    Program out = program;
    auto it = std::find_if(out.functions.begin(), out.functions.end(),
                           [&](const minilang::FunctionDef& f) { return f.name == site.function; });
    if (it == out.functions.end() || it->kind != NodeKind::Application) {
        throw InvalidArgument("no application function '" + site.function + "' to mutate");
    }
    ExprPtr target = minilang::expr_at(it->body, site.location);
    if (!target) {
        throw InvalidArgument("no expression at " + site.function + "@" + std::to_string(site.location));
    }
    ExprPtr replacement = rewrite(target, site.op, site.variant);
    if (!replacement) {
        throw InvalidArgument("mutation " + mutant_id(site) + " does not apply");
    }
    it->body = minilang::replace_at(it->body, site.location, std::move(replacement));
    return out;
}

std::string program_hash(const Program& program) {
    return sha256_hex(minilang::print(program));
}

MutantSample sample_mutants(const Program& program, Operator op, std::size_t n, std::uint64_t seed) {
    const std::vector<MutationSite> population = enumerate_sites(program, op);
    MutantSample sample;
    sample.population = population.size();
    sample.exhausted = n > population.size();

    std::vector<std::size_t> chosen(population.size());
    std::iota(chosen.begin(), chosen.end(), std::size_t{0});
    if (n < population.size()) {
        // Partial Fisher-Yates: the first n slots become a uniform n-subset.
        Rng rng(seed);
        for (std::size_t i = 0; i < n; ++i) {
            const auto j = i + static_cast<std::size_t>(rng.uniform_index(population.size() - i));
            std::swap(chosen[i], chosen[j]);
        }
        chosen.resize(n);
        std::sort(chosen.begin(), chosen.end());
    }

    const std::string base_hash = program_hash(program);
    sample.mutants.reserve(chosen.size());
    for (std::size_t idx : chosen) {
        const MutationSite& site = population[idx];
        sample.mutants.push_back({mutant_id(site), base_hash, site, apply_mutation(program, site)});
    }
    return sample;
}

void require_green_baseline(const Program& program, const minilang::RunOptions& options) {
    std::string failing;
    for (const auto& outcome : minilang::run_tests(program, options)) {
        if (!outcome.passed()) {
            failing += (failing.empty() ? "" : ", ") + outcome.test + " (" +
                       std::string(minilang::to_string(*outcome.reason)) + ")";
        }
    }
    if (!failing.empty()) {
        throw BaselineError("unmutated program fails: " + failing);
    }
}

MutationRecord compute_record(const Program& base, const Mutant& mutant, const CallGraph& g,
                              const minilang::RunOptions& options) {
    if (!mutant.base_hash.empty() && mutant.base_hash != program_hash(base)) {
        throw IntegrityError("mutant '" + mutant.id + "' was not derived from this program");
    }
    auto m = g.find(mutant.site.function);
    if (!m) {
        throw IntegrityError("mutated function '" + mutant.site.function + "' has no node in the call graph");
    }
    if (g.is_test(*m)) {
        throw IntegrityError("mutated function '" + mutant.site.function + "' is a test node");
    }

    MutationRecord record{mutant.id, g.node(*m).id, std::string(to_string(mutant.site.op)), {}};
    for (const auto& outcome : minilang::run_tests(mutant.program, options)) {
        if (outcome.passed()) {
            continue;
        }
        auto t = g.find(outcome.test);
        if (!t || !g.is_test(*t)) {
            throw IntegrityError("failing test '" + outcome.test + "' has no test node in the call graph");
        }
        record.ais.insert(outcome.test);
    }
    return record;
}

} // namespace impactlab
