#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lmx/core/domain.hpp"
#include "lmx/core/individual.hpp"
#include "lmx/core/rng.hpp"
#include "lmx/core/run_log.hpp"
#include "lmx/evolve/variation.hpp"

namespace lmx::evolve {

struct MapDimension {
    double lower = 0.0;
    double upper = 1.0;
    std::size_t bins = 10;
};

using Cell = std::vector<std::size_t>;

/// N-dimensional grid of niches, each keeping the fittest individual seen.
class EliteMap {
public:
    // Throws PreconditionError for no dimensions, zero bins or lower >= upper.
    explicit EliteMap(std::vector<MapDimension> dims, double qd_offset = 0.0);

    // Out-of-range coordinates clamp to the boundary bin.
    [[nodiscard]] Cell cell_of(const std::vector<double>& descriptor) const;

    // Stores `ind` when its cell is empty or it is strictly fitter than the
    // incumbent. Throws PreconditionError for a missing fitness/descriptor or
    // a dimensionality mismatch.
    bool insert(const core::Individual& ind);

    // Sum over occupied cells of (fitness - qd_offset).
    [[nodiscard]] double qd_score() const;
    [[nodiscard]] std::size_t niches_filled() const noexcept { return cells_.size(); }
    [[nodiscard]] const std::vector<MapDimension>& dims() const noexcept { return dims_; }
    [[nodiscard]] const std::map<Cell, core::Individual>& cells() const noexcept { return cells_; }
    [[nodiscard]] std::optional<core::Individual> best() const;

    // cell coordinates..., fitness, descriptor..., genotype
    [[nodiscard]] std::string to_csv() const;

private:
    std::vector<MapDimension> dims_;
    double qd_offset_;
    std::map<Cell, core::Individual> cells_;
};

enum class ParentStrategy {
    uniform,  // elites from uniformly chosen occupied cells
    near      // one anchor cell, the rest from occupied cells within a radius of it
};

struct MapElitesConfig {
    std::vector<MapDimension> dims;
    double qd_offset = 0.0;
    std::size_t evaluation_budget = 1000;
    std::size_t checkpoint_every = 100;
    std::size_t parents_per_call = 3;
    ParentStrategy strategy = ParentStrategy::uniform;
    std::size_t near_radius = 3;  // Chebyshev distance in cells
    std::uint64_t seed = 0;
};

struct MapElitesRecord {
    std::size_t evaluations = 0;
    double qd_score = 0.0;
    std::size_t niches_filled = 0;
    double best_fitness = 0.0;
};

struct MapElitesResult {
    EliteMap map;
    std::vector<MapElitesRecord> history;

    // evaluations,qd_score,niches_filled,best_fitness
    [[nodiscard]] std::string history_csv() const;
};

// Parent cells for one variation call.
std::vector<Cell> sample_parent_cells(const EliteMap& map, std::size_t count, ParentStrategy strategy,
                                      std::size_t radius, core::RngStream& rng);

/// Seeds the map from the domain initializer, then spends the evaluation
/// budget on children of sampled elites. The budget counts evaluations after
/// seeding; a budget of 0 returns the seeded map.
MapElitesResult map_elites_run(const MapElitesConfig& config, const core::Domain& domain,
                               VariationOperator& variation, core::RunLog& log);

} // namespace lmx::evolve
