#include "impactlab/minilang/ast.hpp"

#include <algorithm>

namespace impactlab::minilang {

std::string_view symbol(ArithOp op) {
    switch (op) {
    case ArithOp::Add: return "+";
    case ArithOp::Sub: return "-";
    case ArithOp::Mul: return "*";
    case ArithOp::Div: return "/";
    case ArithOp::Mod: return "%";
    }
    return "?";
}

std::string_view symbol(LogicOp op) {
    return op == LogicOp::And ? "&&" : "||";
}

std::string_view symbol(RelOp op) {
    switch (op) {
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
    case RelOp::Eq: return "==";
    case RelOp::Ne: return "!=";
    }
    return "?";
}

bool equal(const Expr& a, const Expr& b) {
    if (&a == &b) {
        return true;
    }
    if (a.kind != b.kind || a.children.size() != b.children.size()) {
        return false;
    }
    switch (a.kind) {
    case ExprKind::IntLit:
    case ExprKind::BoolLit:
        if (a.value != b.value) return false;
        break;
    case ExprKind::Var:
    case ExprKind::Call:
    case ExprKind::VCall:
        if (a.name != b.name) return false;
        break;
    case ExprKind::Arith:
        if (a.arith != b.arith) return false;
        break;
    case ExprKind::Logic:
        if (a.logic != b.logic) return false;
        break;
    case ExprKind::Rel:
        if (a.rel != b.rel) return false;
        break;
    default:
        break;
    }
    for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (!equal(*a.children[i], *b.children[i])) {
            return false;
        }
    }
    return true;
}

namespace {

std::shared_ptr<Expr> make(ExprKind kind, SourcePos pos, std::vector<ExprPtr> children = {}) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->pos = pos;
    e->children = std::move(children);
    return e;
}

} // namespace

ExprPtr int_lit(std::int64_t v, SourcePos pos) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::IntLit;
    e->value = v;
    e->pos = pos;
    return e;
}

ExprPtr bool_lit(bool v, SourcePos pos) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::BoolLit;
    e->value = v ? 1 : 0;
    e->pos = pos;
    return e;
}

ExprPtr var(std::string name, SourcePos pos) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Var;
    e->name = std::move(name);
    e->pos = pos;
    return e;
}

ExprPtr arith(ArithOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Arith;
    e->arith = op;
    e->children = {std::move(lhs), std::move(rhs)};
    e->pos = pos;
    return e;
}

ExprPtr logic(LogicOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Logic;
    e->logic = op;
    e->children = {std::move(lhs), std::move(rhs)};
    e->pos = pos;
    return e;
}

ExprPtr rel(RelOp op, ExprPtr lhs, ExprPtr rhs, SourcePos pos) {
    auto e = std::make_shared<Expr>();
    e->kind = ExprKind::Rel;
    e->rel = op;
    e->children = {std::move(lhs), std::move(rhs)};
    e->pos = pos;
    return e;
}

ExprPtr not_(ExprPtr e, SourcePos pos) { return make(ExprKind::Not, pos, {std::move(e)}); }
ExprPtr neg(ExprPtr e, SourcePos pos) { return make(ExprKind::Neg, pos, {std::move(e)}); }
ExprPtr abs_(ExprPtr e, SourcePos pos) { return make(ExprKind::Abs, pos, {std::move(e)}); }

ExprPtr if_(ExprPtr cond, ExprPtr then_branch, ExprPtr else_branch, SourcePos pos) {
    return make(ExprKind::If, pos, {std::move(cond), std::move(then_branch), std::move(else_branch)});
}

ExprPtr call(std::string fn, std::vector<ExprPtr> args, SourcePos pos) {
    auto e = make(ExprKind::Call, pos, std::move(args));
    e->name = std::move(fn);
    return e;
}

ExprPtr vcall(std::string iface, std::vector<ExprPtr> args, SourcePos pos) {
    auto e = make(ExprKind::VCall, pos, std::move(args));
    e->name = std::move(iface);
    return e;
}

ExprPtr assert_(ExprPtr e, SourcePos pos) { return make(ExprKind::Assert, pos, {std::move(e)}); }

ExprPtr seq(ExprPtr first, ExprPtr second, SourcePos pos) {
    return make(ExprKind::Seq, pos, {std::move(first), std::move(second)});
}

void for_each_preorder(const ExprPtr& root,
                       const std::function<void(std::size_t, const ExprPtr&)>& visit) {
    std::size_t index = 0;
    std::vector<const ExprPtr*> stack{&root};
    while (!stack.empty()) {
        const ExprPtr& node = *stack.back();
        stack.pop_back();
        visit(index++, node);
        for (auto it = node->children.rbegin(); it != node->children.rend(); ++it) {
            stack.push_back(&*it);
        }
    }
}

std::size_t node_count(const Expr& root) {
    std::size_t n = 1;
    for (const auto& c : root.children) {
        n += node_count(*c);
    }
    return n;
}

ExprPtr expr_at(const ExprPtr& root, std::size_t index) {
    const Expr* node = root.get();
    ExprPtr current = root;
    while (index != 0) {
        --index; // step past the current node
        bool found = false;
        for (const auto& c : node->children) {
            const std::size_t size = node_count(*c);
            if (index < size) {
                current = c;
                node = c.get();
                found = true;
                break;
            }
            index -= size;
        }
        if (!found) {
            return nullptr;
        }
    }
    return current;
}

ExprPtr replace_at(const ExprPtr& root, std::size_t index, ExprPtr replacement) {
    if (index == 0) {
        return replacement;
    }
    std::size_t offset = index - 1;
    for (std::size_t i = 0; i < root->children.size(); ++i) {
        const std::size_t size = node_count(*root->children[i]);
        if (offset < size) {
            auto copy = std::make_shared<Expr>(*root);
            copy->children[i] = replace_at(root->children[i], offset, std::move(replacement));
            return copy;
        }
        offset -= size;
    }
    return root;
}

bool equal(const FunctionDef& a, const FunctionDef& b) {
    return a.name == b.name && a.params == b.params && a.kind == b.kind && equal(*a.body, *b.body);
}

const FunctionDef* Program::find_function(std::string_view name) const {
    auto it = std::find_if(functions.begin(), functions.end(),
                           [&](const FunctionDef& f) { return f.name == name; });
    return it == functions.end() ? nullptr : &*it;
}

std::vector<const FunctionDef*> Program::tests() const {
    std::vector<const FunctionDef*> out;
    for (const auto& f : functions) {
        if (f.kind == NodeKind::Test) {
            out.push_back(&f);
        }
    }
    return out;
}

bool equal(const Program& a, const Program& b) {
    if (a.interfaces != b.interfaces || a.functions.size() != b.functions.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.functions.size(); ++i) {
        if (!equal(a.functions[i], b.functions[i])) {
            return false;
        }
    }
    return true;
}

} // namespace impactlab::minilang
