#pragma once

#include "lmx/symreg/expr.hpp"

namespace lmx::symreg {

// Bottom-up constant folding plus x+0, 0+x, x-0, x*1, 1*x, x*0, 0*x, x/1,
// x**1 and double negation. Folds that would give a non-finite constant are
// skipped. Never increases the node count.
Expr simplify(const Expr& e);

} // namespace lmx::symreg
