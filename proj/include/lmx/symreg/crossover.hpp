#pragma once

#include <cstddef>

#include "lmx/core/rng.hpp"
#include "lmx/symreg/expr.hpp"

namespace lmx::symreg {

inline constexpr std::size_t kMaxDepth = 17;

// A uniformly chosen node of a copy of p1 is replaced by a uniformly chosen
// subtree of p2. Children deeper than kMaxDepth fall back to p1.
Expr subtree_crossover(const Expr& p1, const Expr& p2, core::RngStream& rng);

// Random grammar-valid tree of depth at most `max_depth`, non-negative constants.
Expr random_expression(std::size_t max_depth, std::size_t var_count, core::RngStream& rng);

} // namespace lmx::symreg
