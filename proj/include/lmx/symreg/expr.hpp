#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lmx::symreg {

enum class UnaryOp { neg, sin, cos, tan, exp, log, sqrt, abs };
enum class BinaryOp { add, sub, mul, div, pow };

std::string_view to_string(UnaryOp op) noexcept;
std::string_view to_string(BinaryOp op) noexcept;

/// Expression parse tree with value semantics.
///
/// Constants produced by the parser are non-negative (a leading minus is a
/// neg node); folding may produce negative constants, which print as a
/// negated literal.
struct Expr {
    enum class Kind { constant, variable, unary, binary };

    Kind kind = Kind::constant;
    double value = 0.0;       // constant
    std::size_t index = 0;    // variable, 1-based ("x1")
    UnaryOp unary_op = UnaryOp::neg;
    BinaryOp binary_op = BinaryOp::add;
    std::vector<Expr> children;

    static Expr constant(double v);
    static Expr variable(std::size_t index);
    static Expr unary(UnaryOp op, Expr child);
    static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

    [[nodiscard]] bool is_constant() const noexcept { return kind == Kind::constant; }
    [[nodiscard]] bool is_constant(double v) const noexcept { return kind == Kind::constant && value == v; }

    friend bool operator==(const Expr&, const Expr&) = default;
};

// Number of parse-tree nodes; every node counts one.
std::size_t expression_size(const Expr& e) noexcept;
// Single node = depth 0.
std::size_t expression_depth(const Expr& e) noexcept;
// Largest variable index referenced, 0 if none.
std::size_t max_variable(const Expr& e) noexcept;

// Python-style text with minimal parentheses: "sin(1.5*x1)*cos(0.5*x2)".
// Constants use the shortest round-trip representation (at most 17 digits).
std::string to_string(const Expr& e);

// Preorder access; node 0 is the root.
const Expr& node_at(const Expr& e, std::size_t preorder_index);
Expr& node_at(Expr& e, std::size_t preorder_index);

} // namespace lmx::symreg
