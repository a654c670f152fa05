#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "lmx/symreg/expr.hpp"

namespace lmx::symreg {

struct ParseError {
    std::size_t position = 0;
    std::string message;
};

/// Arithmetic expression grammar (Python precedence):
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('**' unary)?          right associative
///   primary := number | 'x' digits | func '(' expr ')' | '(' expr ')'
///   func    := sin | cos | tan | exp | log | sqrt | abs
///
/// Anything else, including comparisons and '^', fails.
std::optional<Expr> parse_expression(std::string_view text, ParseError* error = nullptr);

} // namespace lmx::symreg
