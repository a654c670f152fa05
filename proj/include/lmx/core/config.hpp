#pragma once

#include <cstddef>
#include <cstdint>
#include <variant>

namespace lmx::core {

struct TournamentSelection {
    std::size_t size = 3;
};

/// Top fraction of the population plus the all-time elite become parents.
struct TruncationSelection {
    double keep_fraction = 0.5;
};

using SelectionPolicy = std::variant<TournamentSelection, TruncationSelection>;

enum class DuplicatePolicy { discard, allow };

struct RunConfig {
    std::size_t population_size = 10;
    std::size_t parents_per_crossover = 3;
    std::size_t generations = 10;
    std::uint64_t seed = 0;
    SelectionPolicy selection = TruncationSelection{};
    double prior_injection_probability = 0.0;
    std::size_t offspring_cap = 3;
    DuplicatePolicy duplicates = DuplicatePolicy::allow;

    // Throws ConfigError naming the offending field.
    void validate() const;
};

} // namespace lmx::core
