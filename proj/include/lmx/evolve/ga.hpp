#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lmx/core/config.hpp"
#include "lmx/core/domain.hpp"
#include "lmx/core/individual.hpp"
#include "lmx/core/run_log.hpp"
#include "lmx/evolve/variation.hpp"

namespace lmx::evolve {

struct GenerationRecord {
    std::size_t generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    double validity_rate = 0.0;
    std::size_t novelty_count = 0;
    std::size_t evaluations = 0;
    std::string best_genotype;
};

struct GaHistory {
    std::vector<GenerationRecord> records;

    // generation,best_fitness,mean_fitness,validity_rate,novelty_count,evaluations
    [[nodiscard]] std::string to_csv() const;
};

struct GaResult {
    GaHistory history;
    core::Population population;
    core::Individual elite;
};

class InitializationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Generational loop with LMX (or any variation operator).
///
///   P <- evaluate(initial genotypes)
///   repeat generations times:
///     parents <- pool from the selection policy
///     while |P_new| < n: P_new += variation(parents)   (or a prior draw)
///     P <- refine(P + P_new) down to n
///
/// Under truncation the pool is the top fraction plus the all-time elite and
/// refinement keeps the n fittest. Under tournament the pool is all of P and
/// refinement is a tournament cull. Excess children from the last call are
/// kept in the merge.
GaResult ga_run(const core::RunConfig& config, const core::Domain& domain, VariationOperator& variation,
                core::RunLog& log);

} // namespace lmx::evolve
