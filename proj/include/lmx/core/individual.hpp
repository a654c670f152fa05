#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace lmx::core {

enum class Provenance { seed, lmx, baseline, prior };

std::string_view to_string(Provenance p) noexcept;

/// A text genotype with its cached fitness.
///
/// Fitness is either unset (not yet evaluated) or a finite real. Individuals
/// that cannot be evaluated are dropped, so a poisoned value never lands here.
class Individual {
public:
    Individual(std::string genotype, Provenance provenance);

    [[nodiscard]] const std::string& genotype() const noexcept { return genotype_; }
    [[nodiscard]] Provenance provenance() const noexcept { return provenance_; }

    [[nodiscard]] bool evaluated() const noexcept { return fitness_.has_value(); }
    // Throws PreconditionError when not evaluated.
    [[nodiscard]] double fitness() const;
    [[nodiscard]] const std::optional<double>& maybe_fitness() const noexcept { return fitness_; }
    // Throws PreconditionError for non-finite values.
    void set_fitness(double value);

    [[nodiscard]] const std::optional<std::vector<double>>& descriptor() const noexcept { return descriptor_; }
    void set_descriptor(std::vector<double> d) { descriptor_ = std::move(d); }

private:
    std::string genotype_;
    std::optional<double> fitness_;
    std::optional<std::vector<double>> descriptor_;
    Provenance provenance_;
};

struct Population {
    std::vector<Individual> members;
    std::size_t generation = 0;
};

} // namespace lmx::core
