#include "impactlab/error.hpp"
#include "impactlab/minilang/syntax.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace impactlab::minilang {

namespace {

enum class Tok {
    Ident,
    Int,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Assign,
    Scope, // ::
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Bang,
    Lt,
    Le,
    Gt,
    Ge,
    EqEq,
    NotEq,
    AndAnd,
    OrOr,
    End,
};

struct Token {
    Tok kind;
    std::string text;
    SourcePos pos;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            const SourcePos pos{line_, col_};
            if (at_end()) {
                out.push_back({Tok::End, "", pos});
                return out;
            }
            const char c = peek();
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string text;
                while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
                    text.push_back(advance());
                }
                out.push_back({Tok::Ident, std::move(text), pos});
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                std::string text;
                while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
                    text.push_back(advance());
                }
                out.push_back({Tok::Int, std::move(text), pos});
            } else {
                out.push_back({punct(pos), "", pos});
            }
        }
    }

private:
    bool at_end() const { return i_ >= src_.size(); }
    char peek(std::size_t ahead = 0) const { return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0'; }

    char advance() {
        const char c = src_[i_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space() {
        while (!at_end()) {
            const char c = peek();
            if (c == '#') {
                while (!at_end() && peek() != '\n') {
                    advance();
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    Tok punct(SourcePos pos) {
        const char c = advance();
        auto two = [&](char next, Tok yes, Tok no) {
            if (peek() == next) {
                advance();
                return yes;
            }
            return no;
        };
        switch (c) {
        case '(': return Tok::LParen;
        case ')': return Tok::RParen;
        case '{': return Tok::LBrace;
        case '}': return Tok::RBrace;
        case ',': return Tok::Comma;
        case ';': return Tok::Semi;
        case '+': return Tok::Plus;
        case '-': return Tok::Minus;
        case '*': return Tok::Star;
        case '/': return Tok::Slash;
        case '%': return Tok::Percent;
        case '!': return two('=', Tok::NotEq, Tok::Bang);
        case '<': return two('=', Tok::Le, Tok::Lt);
        case '>': return two('=', Tok::Ge, Tok::Gt);
        case '=': return two('=', Tok::EqEq, Tok::Assign);
        case ':':
            if (peek() == ':') {
                advance();
                return Tok::Scope;
            }
            break;
        case '&':
            if (peek() == '&') {
                advance();
                return Tok::AndAnd;
            }
            break;
        case '|':
            if (peek() == '|') {
                advance();
                return Tok::OrOr;
            }
            break;
        default:
            break;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", pos.line, pos.column);
    }

    std::string_view src_;
    std::size_t i_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

const std::set<std::string, std::less<>> kKeywords{"fn", "interface", "if", "else", "assert", "abs", "true", "false"};

struct InterfaceDecl {
    std::string name;
    std::vector<std::string> implementors;
    SourcePos pos;
};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    void run(std::vector<FunctionDef>& functions, std::vector<InterfaceDecl>& interfaces) {
        while (peek().kind != Tok::End) {
            const Token& t = peek();
            if (t.kind == Tok::Ident && t.text == "fn") {
                functions.push_back(function());
            } else if (t.kind == Tok::Ident && t.text == "interface") {
                interfaces.push_back(interface_decl());
            } else {
                fail("expected 'fn' or 'interface'");
            }
        }
    }

private:
    const Token& peek(std::size_t ahead = 0) const {
        return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
    }

    const Token& next() {
        const Token& t = toks_[pos_];
        if (pos_ + 1 < toks_.size()) {
            ++pos_;
        }
        return t;
    }

    bool accept(Tok kind) {
        if (peek().kind == kind) {
            next();
            return true;
        }
        return false;
    }

    bool accept_keyword(std::string_view kw) {
        if (peek().kind == Tok::Ident && peek().text == kw) {
            next();
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const {
        const Token& t = peek();
        const std::string found = t.kind == Tok::End ? "end of input"
                                  : t.text.empty()   ? "punctuation"
                                                     : "'" + t.text + "'";
        throw ParseError(what + ", found " + found, t.pos.line, t.pos.column);
    }

    void expect(Tok kind, std::string_view what) {
        if (!accept(kind)) {
            fail("expected " + std::string(what));
        }
    }

    std::string name(std::string_view what) {
        if (peek().kind != Tok::Ident || kKeywords.contains(peek().text)) {
            fail("expected " + std::string(what));
        }
        return next().text;
    }

    FunctionDef function() {
        FunctionDef f;
        f.pos = next().pos; // 'fn'
        f.name = name("function name");
        expect(Tok::LParen, "'('");
        if (peek().kind != Tok::RParen) {
            do {
                f.params.push_back(name("parameter name"));
            } while (accept(Tok::Comma));
        }
        expect(Tok::RParen, "')'");
        f.body = block();
        f.kind = is_test_name(f.name) ? NodeKind::Test : NodeKind::Application;
        return f;
    }

    InterfaceDecl interface_decl() {
        InterfaceDecl decl;
        decl.pos = next().pos; // 'interface'
        decl.name = name("interface name");
        expect(Tok::Assign, "'='");
        do {
            decl.implementors.push_back(name("implementor name"));
        } while (accept(Tok::Comma));
        return decl;
    }

    ExprPtr block() {
        expect(Tok::LBrace, "'{'");
        std::vector<ExprPtr> items{expr()};
        while (accept(Tok::Semi)) {
            items.push_back(expr());
        }
        expect(Tok::RBrace, "'}'");
        ExprPtr out = items.back();
        for (auto it = items.rbegin() + 1; it != items.rend(); ++it) {
            out = seq(*it, out, (*it)->pos);
        }
        return out;
    }

    ExprPtr expr() { return or_expr(); }

    ExprPtr or_expr() {
        ExprPtr lhs = and_expr();
        while (peek().kind == Tok::OrOr) {
            const SourcePos pos = next().pos;
            lhs = logic(LogicOp::Or, lhs, and_expr(), pos);
        }
        return lhs;
    }

    ExprPtr and_expr() {
        ExprPtr lhs = rel_expr();
        while (peek().kind == Tok::AndAnd) {
            const SourcePos pos = next().pos;
            lhs = logic(LogicOp::And, lhs, rel_expr(), pos);
        }
        return lhs;
    }

    ExprPtr rel_expr() {
        ExprPtr lhs = add_expr();
        RelOp op;
        switch (peek().kind) {
        case Tok::Lt: op = RelOp::Lt; break;
        case Tok::Le: op = RelOp::Le; break;
        case Tok::Gt: op = RelOp::Gt; break;
        case Tok::Ge: op = RelOp::Ge; break;
        case Tok::EqEq: op = RelOp::Eq; break;
        case Tok::NotEq: op = RelOp::Ne; break;
        default: return lhs;
        }
        const SourcePos pos = next().pos;
        ExprPtr out = rel(op, lhs, add_expr(), pos);
        switch (peek().kind) {
        case Tok::Lt:
        case Tok::Le:
        case Tok::Gt:
        case Tok::Ge:
        case Tok::EqEq:
        case Tok::NotEq:
            fail("relational operators do not chain; add parentheses");
        default:
            return out;
        }
    }

    ExprPtr add_expr() {
        ExprPtr lhs = mul_expr();
        for (;;) {
            ArithOp op;
            if (peek().kind == Tok::Plus) {
                op = ArithOp::Add;
            } else if (peek().kind == Tok::Minus) {
                op = ArithOp::Sub;
            } else {
                return lhs;
            }
            const SourcePos pos = next().pos;
            lhs = arith(op, lhs, mul_expr(), pos);
        }
    }

    ExprPtr mul_expr() {
        ExprPtr lhs = unary();
        for (;;) {
            ArithOp op;
            if (peek().kind == Tok::Star) {
                op = ArithOp::Mul;
            } else if (peek().kind == Tok::Slash) {
                op = ArithOp::Div;
            } else if (peek().kind == Tok::Percent) {
                op = ArithOp::Mod;
            } else {
                return lhs;
            }
            const SourcePos pos = next().pos;
            lhs = arith(op, lhs, unary(), pos);
        }
    }

    ExprPtr unary() {
        const SourcePos pos = peek().pos;
        if (accept(Tok::Bang)) {
            return not_(unary(), pos);
        }
        if (accept(Tok::Minus)) {
            return neg(unary(), pos);
        }
        if (accept_keyword("abs")) {
            return abs_(unary(), pos);
        }
        return primary();
    }

    std::vector<ExprPtr> arguments() {
        expect(Tok::LParen, "'('");
        std::vector<ExprPtr> args;
        if (peek().kind != Tok::RParen) {
            do {
                args.push_back(expr());
            } while (accept(Tok::Comma));
        }
        expect(Tok::RParen, "')'");
        return args;
    }

    ExprPtr primary() {
        const Token& t = peek();
        const SourcePos pos = t.pos;
        if (t.kind == Tok::Int) {
            std::int64_t value = 0;
            const std::string& text = t.text;
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
            if (ec != std::errc{} || ptr != text.data() + text.size()) {
                throw ParseError("integer literal out of range: " + text, pos.line, pos.column);
            }
            next();
            return int_lit(value, pos);
        }
        if (accept(Tok::LParen)) {
            ExprPtr inner = expr();
            expect(Tok::RParen, "')'");
            return inner;
        }
        if (t.kind != Tok::Ident) {
            fail("expected an expression");
        }
        if (accept_keyword("true")) {
            return bool_lit(true, pos);
        }
        if (accept_keyword("false")) {
            return bool_lit(false, pos);
        }
        if (accept_keyword("assert")) {
            expect(Tok::LParen, "'('");
            ExprPtr inner = expr();
            expect(Tok::RParen, "')'");
            return assert_(inner, pos);
        }
        if (accept_keyword("if")) {
            expect(Tok::LParen, "'('");
            ExprPtr cond = expr();
            expect(Tok::RParen, "')'");
            ExprPtr then_branch = block();
            if (!accept_keyword("else")) {
                fail("expected 'else'");
            }
            ExprPtr else_branch = block();
            return if_(cond, then_branch, else_branch, pos);
        }
        std::string id = name("an expression");
        if (peek().kind == Tok::Scope) {
            next();
            return vcall(std::move(id), arguments(), pos);
        }
        if (peek().kind == Tok::LParen) {
            return call(std::move(id), arguments(), pos);
        }
        return var(std::move(id), pos);
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
};

[[noreturn]] void semantic_error(const std::string& what, SourcePos pos) {
    throw ParseError(what, pos.line, pos.column);
}

void check_body(const Expr& e, const FunctionDef& fn, const Program& program,
                const std::unordered_map<std::string, std::size_t>& iface_arity) {
    switch (e.kind) {
    case ExprKind::Var: {
        bool found = false;
        for (const auto& p : fn.params) {
            found = found || p == e.name;
        }
        if (!found) {
            semantic_error("unknown identifier '" + e.name + "'", e.pos);
        }
        break;
    }
    case ExprKind::Call: {
        const FunctionDef* callee = program.find_function(e.name);
        if (!callee) {
            if (program.interfaces.contains(e.name)) {
                semantic_error("interface '" + e.name + "' must be called as " + e.name + "::(...)", e.pos);
            }
            semantic_error("unknown identifier '" + e.name + "'", e.pos);
        }
        if (callee->kind == NodeKind::Test) {
            semantic_error("test function '" + e.name + "' cannot be called", e.pos);
        }
        if (callee->params.size() != e.children.size()) {
            semantic_error("'" + e.name + "' expects " + std::to_string(callee->params.size()) +
                               " argument(s), got " + std::to_string(e.children.size()),
                           e.pos);
        }
        break;
    }
    case ExprKind::VCall: {
        auto it = iface_arity.find(e.name);
        if (it == iface_arity.end()) {
            semantic_error("unknown identifier '" + e.name + "'", e.pos);
        }
        if (it->second != e.children.size()) {
            semantic_error("interface '" + e.name + "' expects " + std::to_string(it->second) +
                               " argument(s), got " + std::to_string(e.children.size()),
                           e.pos);
        }
        break;
    }
    default:
        break;
    }
    for (const auto& c : e.children) {
        check_body(*c, fn, program, iface_arity);
    }
}

} // namespace

Program parse(std::string_view source) {
    std::vector<FunctionDef> functions;
    std::vector<InterfaceDecl> interfaces;
    Parser(Lexer(source).run()).run(functions, interfaces);

    Program program;
    std::set<std::string, std::less<>> seen;
    for (auto& f : functions) {
        if (!seen.insert(f.name).second) {
            semantic_error("duplicate function '" + f.name + "'", f.pos);
        }
        if (f.kind == NodeKind::Test && !f.params.empty()) {
            semantic_error("test function '" + f.name + "' must not take parameters", f.pos);
        }
        std::set<std::string, std::less<>> params;
        for (const auto& p : f.params) {
            if (!params.insert(p).second) {
                semantic_error("duplicate parameter '" + p + "' in '" + f.name + "'", f.pos);
            }
        }
        program.functions.push_back(std::move(f));
    }

    std::unordered_map<std::string, std::size_t> iface_arity;
    for (auto& decl : interfaces) {
        if (program.interfaces.contains(decl.name)) {
            semantic_error("duplicate interface '" + decl.name + "'", decl.pos);
        }
        if (seen.contains(decl.name)) {
            semantic_error("interface '" + decl.name + "' clashes with a function name", decl.pos);
        }
        std::set<std::string, std::less<>> members;
        std::optional<std::size_t> arity;
        for (const auto& impl : decl.implementors) {
            const FunctionDef* f = program.find_function(impl);
            if (!f) {
                semantic_error("unknown implementor '" + impl + "' of interface '" + decl.name + "'", decl.pos);
            }
            if (f->kind == NodeKind::Test) {
                semantic_error("test function '" + impl + "' cannot implement an interface", decl.pos);
            }
            if (!members.insert(impl).second) {
                semantic_error("implementor '" + impl + "' listed twice", decl.pos);
            }
            if (arity && *arity != f->params.size()) {
                semantic_error("implementors of '" + decl.name + "' disagree on arity", decl.pos);
            }
            arity = f->params.size();
        }
        iface_arity.emplace(decl.name, *arity);
        program.interfaces.emplace(decl.name, decl.implementors);
    }

    for (const auto& f : program.functions) {
        check_body(*f.body, f, program, iface_arity);
    }
    return program;
}

Program parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InvalidArgument("cannot open program file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str());
}

} // namespace impactlab::minilang
