#include "lmx/core/evaluate.hpp"

#include <cmath>
#include <vector>

namespace lmx::core {

Population evaluate_population(Population pop, const FitnessFn& fitness, EvaluationStats* stats)
{
    const auto n = static_cast<std::ptrdiff_t>(pop.members.size());
    std::vector<std::optional<double>> values(pop.members.size());
    std::vector<char> fresh(pop.members.size(), 0);

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        auto& m = pop.members[static_cast<std::size_t>(i)];
        if (m.evaluated()) {
            continue;
        }
        fresh[static_cast<std::size_t>(i)] = 1;
        auto v = fitness(m.genotype());
        if (v && std::isfinite(*v)) {
            values[static_cast<std::size_t>(i)] = v;
        }
    }

    Population out;
    out.generation = pop.generation;
    out.members.reserve(pop.members.size());
    for (std::size_t i = 0; i < pop.members.size(); ++i) {
        auto& m = pop.members[i];
        if (fresh[i] != 0) {
            if (stats) {
                ++stats->evaluated;
            }
            if (!values[i]) {
                if (stats) {
                    ++stats->invalid;
                }
                continue;
            }
            m.set_fitness(*values[i]);
        }
        out.members.push_back(std::move(m));
    }
    return out;
}

} // namespace lmx::core
