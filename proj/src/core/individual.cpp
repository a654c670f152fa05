#include "lmx/core/individual.hpp"

#include <cmath>

#include "lmx/core/error.hpp"

namespace lmx::core {

std::string_view to_string(Provenance p) noexcept
{
    switch (p) {
    case Provenance::seed: return "seed";
    case Provenance::lmx: return "lmx";
    case Provenance::baseline: return "baseline-op";
    case Provenance::prior: return "prior-injection";
    }
    return "unknown";
}

Individual::Individual(std::string genotype, Provenance provenance)
    : genotype_(std::move(genotype)), provenance_(provenance)
{
    if (genotype_.empty()) {
        throw PreconditionError("individual genotype must be non-empty");
    }
}

double Individual::fitness() const
{
    if (!fitness_) {
        throw PreconditionError("individual '" + genotype_ + "' has not been evaluated");
    }
    return *fitness_;
}

void Individual::set_fitness(double value)
{
    if (!std::isfinite(value)) {
        throw PreconditionError("fitness must be finite");
    }
    fitness_ = value;
}

} // namespace lmx::core
