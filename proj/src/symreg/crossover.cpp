#include "lmx/symreg/crossover.hpp"

#include <cmath>

#include "lmx/core/error.hpp"

namespace lmx::symreg {

Expr subtree_crossover(const Expr& p1, const Expr& p2, core::RngStream& rng)
{
    Expr child = p1;
    const std::size_t at = rng.uniform_index(expression_size(child));
    const std::size_t from = rng.uniform_index(expression_size(p2));
    node_at(child, at) = node_at(p2, from);
    if (expression_depth(child) > kMaxDepth) {
        return p1;
    }
    return child;
}

Expr random_expression(std::size_t max_depth, std::size_t var_count, core::RngStream& rng)
{
    if (var_count == 0) {
        throw PreconditionError("var_count must be positive");
    }
    if (max_depth == 0 || rng.bernoulli(0.3)) {
        if (rng.bernoulli(0.6)) {
            return Expr::variable(1 + rng.uniform_index(var_count));
        }
        return Expr::constant(std::round(rng.uniform(0.0, 5.0) * 100.0) / 100.0);
    }
    if (rng.bernoulli(0.3)) {
        static constexpr UnaryOp ops[] = {UnaryOp::neg, UnaryOp::sin,  UnaryOp::cos, UnaryOp::tan,
                                          UnaryOp::exp, UnaryOp::log, UnaryOp::sqrt, UnaryOp::abs};
        const auto op = ops[rng.uniform_index(std::size(ops))];
        return Expr::unary(op, random_expression(max_depth - 1, var_count, rng));
    }
    static constexpr BinaryOp ops[] = {BinaryOp::add, BinaryOp::sub, BinaryOp::mul, BinaryOp::div, BinaryOp::pow};
    const auto op = ops[rng.uniform_index(std::size(ops))];
    Expr lhs = random_expression(max_depth - 1, var_count, rng);
    Expr rhs = random_expression(max_depth - 1, var_count, rng);
    return Expr::binary(op, std::move(lhs), std::move(rhs));
}

} // namespace lmx::symreg
