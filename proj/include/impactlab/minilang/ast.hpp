#pragma once

#include "impactlab/callgraph.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

// MiniLang: a small expression language with plain functions, zero-argument
// test functions and interface-based virtual calls. All values are 64-bit
// integers; comparisons and logical operators yield 0 or 1 and any nonzero
// value counts as true.
namespace impactlab::minilang {

enum class ExprKind {
    IntLit,
    BoolLit,
    Var,
    Arith,
    Logic,
    Rel,
    Not,
    Neg,
    Abs,
    If,
    Call,
    VCall,
    Assert,
    Seq,
};

enum class ArithOp { Add, Sub, Mul, Div, Mod };
enum class LogicOp { And, Or };
enum class RelOp { Lt, Le, Gt, Ge, Eq, Ne };

std::string_view symbol(ArithOp op);
std::string_view symbol(LogicOp op);
std::string_view symbol(RelOp op);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct SourcePos {
    std::size_t line = 0;
    std::size_t column = 0;
};

/// Immutable AST node. Which fields are meaningful depends on `kind`:
/// literals use `value`, Var/Call/VCall use `name`, operator nodes use the
/// matching op field, and sub-expressions live in `children` (If holds
/// cond/then/else, Seq holds first/second).
struct Expr {
    ExprKind kind = ExprKind::IntLit;
    std::int64_t value = 0;
    std::string name;
    ArithOp arith = ArithOp::Add;
    LogicOp logic = LogicOp::And;
    RelOp rel = RelOp::Lt;
    std::vector<ExprPtr> children;
    SourcePos pos; // diagnostics only; ignored by equality

    const Expr& child(std::size_t i) const { return *children[i]; }
};

/// Structural equality, ignoring source positions.
bool equal(const Expr& a, const Expr& b);

ExprPtr int_lit(std::int64_t v, SourcePos pos = {});
ExprPtr bool_lit(bool v, SourcePos pos = {});
ExprPtr var(std::string name, SourcePos pos = {});
ExprPtr arith(ArithOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});
ExprPtr logic(LogicOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});
ExprPtr rel(RelOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos = {});
ExprPtr not_(ExprPtr e, SourcePos pos = {});
ExprPtr neg(ExprPtr e, SourcePos pos = {});
ExprPtr abs_(ExprPtr e, SourcePos pos = {});
ExprPtr if_(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch, SourcePos pos = {});
ExprPtr call(std::string fn, std::vector<ExprPtr> args, SourcePos pos = {});
ExprPtr vcall(std::string iface, std::vector<ExprPtr> args, SourcePos pos = {});
ExprPtr assert_(ExprPtr e, SourcePos pos = {});
ExprPtr seq(ExprPtr first, ExprPtr second, SourcePos pos = {});

/// Visits every node in preorder; the index is the node's location key
/// within its function body (root = 0).
void for_each_preorder(const ExprPtr& root,
                       const std::function<void(std::size_t index, const ExprPtr& node)>& visit);

std::size_t node_count(const Expr& root);

/// Node at preorder `index`, or nullptr when out of range.
ExprPtr expr_at(const ExprPtr& root, std::size_t index);

/// Copy of `root` with the node at preorder `index` swapped for
/// `replacement`. Untouched subtrees are shared with the original.
ExprPtr replace_at(const ExprPtr& root, std::size_t index, ExprPtr replacement);

struct FunctionDef {
    std::string name;
    std::vector<std::string> params;
    ExprPtr body;
    NodeKind kind = NodeKind::Application;
    SourcePos pos;
};

bool equal(const FunctionDef& a, const FunctionDef& b);

struct Program {
    std::vector<FunctionDef> functions;
    std::map<std::string, std::vector<std::string>> interfaces;

    const FunctionDef* find_function(std::string_view name) const;
    std::vector<const FunctionDef*> tests() const;
};

bool equal(const Program& a, const Program& b);

inline bool is_test_name(std::string_view name) {
    return name.starts_with("test_");
}

} // namespace impactlab::minilang
