#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>

#include "lmx/core/individual.hpp"

namespace lmx::core {

using FitnessFn = std::function<std::optional<double>(std::string_view)>;

struct EvaluationStats {
    std::size_t evaluated = 0;
    std::size_t invalid = 0;
};

// Evaluates every unevaluated member and drops the ones whose fitness is
// invalid or non-finite. Survivor order is preserved. Fitness calls fan out
// over OpenMP threads, so `fitness` must be thread safe.
Population evaluate_population(Population pop, const FitnessFn& fitness, EvaluationStats* stats = nullptr);

} // namespace lmx::core
