#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace lmx::symreg {

struct ParetoPoint {
    double r2_train = 0.0;
    double r2_test = 0.0;
    std::size_t size = 0;
    std::string expression;
};

// true when a is at least as good on both (higher r2_train, smaller size)
// and strictly better on one.
bool dominates(const ParetoPoint& a, const ParetoPoint& b) noexcept;

// Non-dominated subset, sorted by size then descending r2_train. Exact
// duplicates of (r2_train, size) keep the first occurrence.
std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points);

std::string pareto_csv(const std::vector<ParetoPoint>& front);

} // namespace lmx::symreg
