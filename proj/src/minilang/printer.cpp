#include "impactlab/minilang/syntax.hpp"

#include <sstream>

namespace impactlab::minilang {

namespace {

// Binding strength, loosest first; mirrors the parser's grammar levels.
enum Prec { kOr = 1, kAnd, kRel, kAdd, kMul, kUnary, kPrimary };

int precedence(const Expr& e) {
    switch (e.kind) {
    case ExprKind::Logic: return e.logic == LogicOp::Or ? kOr : kAnd;
    case ExprKind::Rel: return kRel;
    case ExprKind::Arith:
        return (e.arith == ArithOp::Add || e.arith == ArithOp::Sub) ? kAdd : kMul;
    case ExprKind::Not:
    case ExprKind::Neg:
    case ExprKind::Abs: return kUnary;
    default: return kPrimary;
    }
}

class Printer {
public:
    explicit Printer(std::ostream& out) : out_(out) {}

    void expr(const Expr& e) {
        switch (e.kind) {
        case ExprKind::IntLit: out_ << e.value; break;
        case ExprKind::BoolLit: out_ << (e.value != 0 ? "true" : "false"); break;
        case ExprKind::Var: out_ << e.name; break;
        case ExprKind::Arith: binary(e, symbol(e.arith)); break;
        case ExprKind::Logic: binary(e, symbol(e.logic)); break;
        case ExprKind::Rel: binary(e, symbol(e.rel)); break;
        case ExprKind::Not:
            out_ << '!';
            operand(e.child(0), kUnary);
            break;
        case ExprKind::Neg:
            out_ << '-';
            operand(e.child(0), kUnary);
            break;
        case ExprKind::Abs:
            out_ << "abs(";
            expr(e.child(0));
            out_ << ')';
            break;
        case ExprKind::If:
            out_ << "if (";
            expr(e.child(0));
            out_ << ") ";
            block(e.child(1));
            out_ << " else ";
            block(e.child(2));
            break;
        case ExprKind::Call:
        case ExprKind::VCall:
            out_ << e.name << (e.kind == ExprKind::VCall ? "::(" : "(");
            for (std::size_t i = 0; i < e.children.size(); ++i) {
                if (i != 0) out_ << ", ";
                expr(e.child(i));
            }
            out_ << ')';
            break;
        case ExprKind::Assert:
            out_ << "assert(";
            expr(e.child(0));
            out_ << ')';
            break;
        case ExprKind::Seq:
            // Only reachable for a sequence outside a block; print its items.
            sequence(e);
            break;
        }
    }

    void block(const Expr& e) {
        out_ << "{ ";
        sequence(e);
        out_ << " }";
    }

private:
    void sequence(const Expr& e) {
        const Expr* cur = &e;
        while (cur->kind == ExprKind::Seq) {
            expr(cur->child(0));
            out_ << "; ";
            cur = &cur->child(1);
        }
        expr(*cur);
    }

    void binary(const Expr& e, std::string_view op) {
        const int p = precedence(e);
        // Relational operators do not chain, so an equal-precedence operand
        // is parenthesized on either side; the others associate left.
        operand(e.child(0), p == kRel ? p + 1 : p);
        out_ << ' ' << op << ' ';
        operand(e.child(1), p + 1);
    }

    void operand(const Expr& e, int min_prec) {
        if (precedence(e) < min_prec) {
            out_ << '(';
            expr(e);
            out_ << ')';
        } else {
            expr(e);
        }
    }

    std::ostream& out_;
};

} // namespace

std::string print(const Expr& expr) {
    std::ostringstream out;
    Printer(out).expr(expr);
    return out.str();
}

std::string print(const Program& program) {
    std::ostringstream out;
    Printer printer(out);
    for (const auto& [name, impls] : program.interfaces) {
        out << "interface " << name << " = ";
        for (std::size_t i = 0; i < impls.size(); ++i) {
            if (i != 0) out << ", ";
            out << impls[i];
        }
        out << '\n';
    }
    for (const auto& f : program.functions) {
        out << "fn " << f.name << '(';
        for (std::size_t i = 0; i < f.params.size(); ++i) {
            if (i != 0) out << ", ";
            out << f.params[i];
        }
        out << ") ";
        printer.block(*f.body);
        out << '\n';
    }
    return out.str();
}

} // namespace impactlab::minilang
