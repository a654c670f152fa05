#include "lmx/core/config.hpp"

#include <string>

#include "lmx/core/error.hpp"

namespace lmx::core {

void RunConfig::validate() const
{
    if (population_size < 1) {
        throw ConfigError("population_size must be >= 1");
    }
    if (parents_per_crossover < 1) {
        throw ConfigError("parents_per_crossover (k) must be >= 1");
    }
    if (offspring_cap < 1) {
        throw ConfigError("offspring_cap must be >= 1");
    }
    if (!(prior_injection_probability >= 0.0 && prior_injection_probability <= 1.0)) {
        throw ConfigError("prior_injection_probability must lie in [0, 1]");
    }
    if (const auto* t = std::get_if<TournamentSelection>(&selection)) {
        if (t->size < 1 || t->size > population_size) {
            throw ConfigError("selection.size must lie in [1, population_size] (got " + std::to_string(t->size) + ")");
        }
    } else if (const auto* tr = std::get_if<TruncationSelection>(&selection)) {
        if (!(tr->keep_fraction > 0.0 && tr->keep_fraction <= 1.0)) {
            throw ConfigError("selection.keep_fraction must lie in (0, 1]");
        }
    }
}

} // namespace lmx::core
