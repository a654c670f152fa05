#include "lmx/evolve/selection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lmx/core/error.hpp"

namespace lmx::evolve {

namespace {

void require_evaluated(std::span<const core::Individual> pop, const char* who)
{
    if (pop.empty()) {
        throw PreconditionError(std::string(who) + ": empty population");
    }
    for (const auto& m : pop) {
        if (!m.evaluated()) {
            throw PreconditionError(std::string(who) + ": population has unevaluated members");
        }
    }
}

std::vector<std::size_t> ranked(std::span<const core::Individual> pop)
{
    std::vector<std::size_t> idx(pop.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return pop[a].fitness() > pop[b].fitness(); });
    return idx;
}

} // namespace

std::size_t tournament_select(std::span<const core::Individual> pop, std::size_t size, const IndexDraw& draw)
{
    require_evaluated(pop, "tournament_select");
    if (size < 1) {
        throw PreconditionError("tournament_select: size must be >= 1");
    }
    std::size_t winner = draw(pop.size());
    for (std::size_t i = 1; i < size; ++i) {
        const std::size_t c = draw(pop.size());
        if (pop[c].fitness() > pop[winner].fitness()) {
            winner = c;
        }
    }
    return winner;
}

std::size_t tournament_select(std::span<const core::Individual> pop, std::size_t size, core::RngStream& rng)
{
    return tournament_select(pop, size, [&rng](std::size_t n) { return rng.uniform_index(n); });
}

std::vector<core::Individual> truncation_step(std::span<const core::Individual> pop, const core::Individual* elite,
                                              double keep_fraction)
{
    require_evaluated(pop, "truncation_step");
    if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
        throw PreconditionError("truncation_step: keep_fraction must lie in (0, 1]");
    }
    const auto keep = std::min(
        pop.size(), static_cast<std::size_t>(std::ceil(keep_fraction * static_cast<double>(pop.size()) - 1e-9)));
    const auto order = ranked(pop);
    std::vector<core::Individual> out;
    out.reserve(keep + 1);
    bool elite_present = elite == nullptr;
    for (std::size_t i = 0; i < keep; ++i) {
        const auto& m = pop[order[i]];
        if (elite && !elite_present && m.genotype() == elite->genotype()) {
            elite_present = true;
        }
        out.push_back(m);
    }
    if (!elite_present) {
        out.push_back(*elite);
    }
    return out;
}

std::vector<core::Individual> tournament_cull(std::vector<core::Individual> pool, std::size_t n, std::size_t size,
                                              core::RngStream& rng)
{
    if (pool.size() <= n) {
        return pool;
    }
    std::vector<core::Individual> survivors;
    survivors.reserve(n);
    while (survivors.size() < n) {
        const auto w = tournament_select(pool, std::min(size, pool.size()), rng);
        survivors.push_back(std::move(pool[w]));
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(w));
    }
    return survivors;
}

std::vector<core::Individual> truncation_cull(std::vector<core::Individual> pool, std::size_t n)
{
    if (pool.size() <= n) {
        return pool;
    }
    std::stable_sort(pool.begin(), pool.end(),
                     [](const auto& a, const auto& b) { return a.fitness() > b.fitness(); });
    pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(n), pool.end());
    return pool;
}

std::size_t best_index(std::span<const core::Individual> pop)
{
    require_evaluated(pop, "best_index");
    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i) {
        if (pop[i].fitness() > pop[best].fitness()) {
            best = i;
        }
    }
    return best;
}

} // namespace lmx::evolve
