#pragma once

#include "impactlab/minilang/ast.hpp"

#include <string>
#include <string_view>

namespace impactlab::minilang {

/// Parses and validates a MiniLang source file.
///
///   program := item*
///   item    := "fn" NAME "(" [NAME ("," NAME)*] ")" block
///            | "interface" NAME "=" NAME ("," NAME)*
///   block   := "{" expr (";" expr)* "}"
///
/// Binding from tightest to loosest: unary (! - abs), * / %, + -,
/// relational (non-associative), &&, ||. Primaries are literals, names,
/// parenthesized expressions, calls f(a, b), virtual calls I::(a, b),
/// assert(e) and if (c) { ... } else { ... }. `#` starts a line comment.
///
/// Throws ParseError (with line and column) on syntax errors, duplicate
/// names, unknown identifiers, arity mismatches and test functions that
/// declare parameters.
Program parse(std::string_view source);

Program parse_file(const std::string& path);

/// Canonical source text; parse(print(p)) is structurally equal to p.
std::string print(const Program& program);
std::string print(const Expr& expr);

} // namespace impactlab::minilang
