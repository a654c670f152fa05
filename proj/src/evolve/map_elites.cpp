#include "lmx/evolve/map_elites.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lmx/core/error.hpp"
#include "lmx/core/evaluate.hpp"
#include "lmx/core/io.hpp"
#include "lmx/evolve/ga.hpp"

namespace lmx::evolve {

EliteMap::EliteMap(std::vector<MapDimension> dims, double qd_offset) : dims_(std::move(dims)), qd_offset_(qd_offset)
{
    if (dims_.empty()) {
        throw PreconditionError("elite map needs at least one dimension");
    }
    for (const auto& d : dims_) {
        if (d.bins < 1 || !(d.lower < d.upper)) {
            throw PreconditionError("elite map dimension needs bins >= 1 and lower < upper");
        }
    }
}

Cell EliteMap::cell_of(const std::vector<double>& descriptor) const
{
    if (descriptor.size() != dims_.size()) {
        throw PreconditionError("descriptor has " + std::to_string(descriptor.size()) + " dimensions, map has " +
                                std::to_string(dims_.size()));
    }
    Cell c(dims_.size());
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        const auto& d = dims_[i];
        const double t = (descriptor[i] - d.lower) / (d.upper - d.lower) * static_cast<double>(d.bins);
        const double clamped = std::clamp(std::isnan(t) ? 0.0 : std::floor(t), 0.0, static_cast<double>(d.bins - 1));
        c[i] = static_cast<std::size_t>(clamped);
    }
    return c;
}

bool EliteMap::insert(const core::Individual& ind)
{
    if (!ind.evaluated() || !ind.descriptor()) {
        throw PreconditionError("map insert needs an evaluated individual with a descriptor");
    }
    auto cell = cell_of(*ind.descriptor());
    auto it = cells_.find(cell);
    if (it == cells_.end()) {
        cells_.emplace(std::move(cell), ind);
        return true;
    }
    if (ind.fitness() > it->second.fitness()) {
        it->second = ind;
        return true;
    }
    return false;
}

double EliteMap::qd_score() const
{
    double s = 0.0;
    for (const auto& [cell, ind] : cells_) {
        s += ind.fitness() - qd_offset_;
    }
    return s;
}

std::optional<core::Individual> EliteMap::best() const
{
    std::optional<core::Individual> b;
    for (const auto& [cell, ind] : cells_) {
        if (!b || ind.fitness() > b->fitness()) {
            b = ind;
        }
    }
    return b;
}

std::string EliteMap::to_csv() const
{
    std::ostringstream out;
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        out << "cell_" << i << ',';
    }
    out << "fitness";
    for (std::size_t i = 0; i < dims_.size(); ++i) {
        out << ",descriptor_" << i;
    }
    out << ",genotype\n";
    for (const auto& [cell, ind] : cells_) {
        for (auto c : cell) {
            out << c << ',';
        }
        out << core::format_double(ind.fitness());
        for (double d : *ind.descriptor()) {
            out << ',' << core::format_double(d);
        }
        out << ',' << core::csv_field(ind.genotype()) << '\n';
    }
    return out.str();
}

std::string MapElitesResult::history_csv() const
{
    std::ostringstream out;
    out << "evaluations,qd_score,niches_filled,best_fitness\n";
    for (const auto& r : history) {
        out << r.evaluations << ',' << core::format_double(r.qd_score) << ',' << r.niches_filled << ','
            << core::format_double(r.best_fitness) << '\n';
    }
    return out.str();
}

std::vector<Cell> sample_parent_cells(const EliteMap& map, std::size_t count, ParentStrategy strategy,
                                      std::size_t radius, core::RngStream& rng)
{
    std::vector<Cell> occupied;
    occupied.reserve(map.cells().size());
    for (const auto& [cell, ind] : map.cells()) {
        occupied.push_back(cell);
    }
    if (occupied.empty()) {
        throw PreconditionError("cannot sample parents from an empty map");
    }

    std::vector<Cell> out;
    if (strategy == ParentStrategy::uniform) {
        for (auto i : sample_without_replacement(occupied.size(), count, rng)) {
            out.push_back(occupied[i]);
        }
        return out;
    }

    const Cell anchor = occupied[rng.uniform_index(occupied.size())];
    out.push_back(anchor);
    std::vector<Cell> near, far;
    for (const auto& c : occupied) {
        if (c == anchor) {
            continue;
        }
        std::size_t dist = 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            dist = std::max(dist, c[i] > anchor[i] ? c[i] - anchor[i] : anchor[i] - c[i]);
        }
        (dist <= radius ? near : far).push_back(c);
    }
    for (auto i : sample_without_replacement(near.size(), count - 1, rng)) {
        out.push_back(near[i]);
    }
    if (out.size() < count) {
        for (auto i : sample_without_replacement(far.size(), count - out.size(), rng)) {
            out.push_back(far[i]);
        }
    }
    return out;
}

MapElitesResult map_elites_run(const MapElitesConfig& config, const core::Domain& domain,
                               VariationOperator& variation, core::RunLog& log)
{
    if (config.parents_per_call < 1) {
        throw ConfigError("map-elites parents_per_call must be >= 1");
    }
    if (config.checkpoint_every < 1) {
        throw ConfigError("map-elites checkpoint_every must be >= 1");
    }
    MapElitesResult result{EliteMap(config.dims, config.qd_offset), {}};
    auto& map = result.map;
    core::RngStream init_rng(config.seed, "init");
    core::RngStream parent_rng(config.seed, "parents");
    core::RngStream vary_rng(config.seed, "vary");

    const core::FitnessFn fitness = [&domain](std::string_view g) { return domain.fitness(g); };
    auto evaluate_and_insert = [&](core::Population batch, std::size_t step, const std::string& stream) {
        core::EvaluationStats stats;
        batch = core::evaluate_population(std::move(batch), fitness, &stats);
        for (auto& m : batch.members) {
            auto d = domain.descriptor(m.genotype());
            if (!d) {
                continue;
            }
            m.set_descriptor(std::move(*d));
            log.evaluation(step, m, stream);
            map.insert(m);
        }
        return stats.evaluated;
    };
    auto checkpoint = [&](std::size_t evals) {
        auto b = map.best();
        result.history.push_back({evals, map.qd_score(), map.niches_filled(), b ? b->fitness() : 0.0});
    };

    core::Population seeds;
    for (auto& g : domain.initial_genotypes(init_rng)) {
        if (auto c = domain.canonicalize(g)) {
            seeds.members.emplace_back(std::move(*c), core::Provenance::seed);
        }
    }
    evaluate_and_insert(std::move(seeds), 0, init_rng.label());
    if (map.niches_filled() == 0) {
        throw InitializationError("initializer produced no valid individuals for the map");
    }
    checkpoint(0);

    std::size_t evals = 0;
    std::size_t next_checkpoint = config.checkpoint_every;
    std::size_t barren_calls = 0;
    std::size_t step = 0;
    while (evals < config.evaluation_budget && barren_calls < 1000) {
        ++step;
        std::vector<core::Individual> parents;
        for (const auto& c : sample_parent_cells(map, config.parents_per_call, config.strategy, config.near_radius,
                                                 parent_rng)) {
            parents.push_back(map.cells().at(c));
        }
        VariationContext ctx;
        ctx.log = &log;
        ctx.generation = step;
        core::Population batch;
        for (auto& p : variation.vary(parents, vary_rng, ctx)) {
            if (evals + batch.members.size() >= config.evaluation_budget) {
                break;
            }
            if (auto c = domain.canonicalize(p.genotype)) {
                batch.members.emplace_back(std::move(*c), p.provenance);
            }
        }
        if (batch.members.empty()) {
            ++barren_calls;
            continue;
        }
        barren_calls = 0;
        evals += evaluate_and_insert(std::move(batch), step, vary_rng.label());
        if (evals >= next_checkpoint) {
            checkpoint(evals);
            while (next_checkpoint <= evals) {
                next_checkpoint += config.checkpoint_every;
            }
        }
    }
    if (result.history.back().evaluations != evals) {
        checkpoint(evals);
    }
    return result;
}

} // namespace lmx::evolve
