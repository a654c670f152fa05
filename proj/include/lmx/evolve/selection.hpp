#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "lmx/core/individual.hpp"
#include "lmx/core/rng.hpp"

namespace lmx::evolve {

// Returns an index in [0, n). Lets tests force the draw sequence.
using IndexDraw = std::function<std::size_t(std::size_t n)>;

// Best of `size` uniform draws with replacement; ties go to the earliest draw.
// Returns the winner's index. Throws PreconditionError on an empty or
// unevaluated population or size 0.
std::size_t tournament_select(std::span<const core::Individual> pop, std::size_t size, const IndexDraw& draw);
std::size_t tournament_select(std::span<const core::Individual> pop, std::size_t size, core::RngStream& rng);

// Top ceil(keep_fraction * n) by fitness (stable) plus the elite when it is
// not already among them.
std::vector<core::Individual> truncation_step(std::span<const core::Individual> pop, const core::Individual* elite,
                                              double keep_fraction);

// Reduce to n survivors by repeated tournaments without replacement.
std::vector<core::Individual> tournament_cull(std::vector<core::Individual> pool, std::size_t n,
                                              std::size_t size, core::RngStream& rng);

// Keep the n fittest (stable on ties).
std::vector<core::Individual> truncation_cull(std::vector<core::Individual> pool, std::size_t n);

// Index of the fittest member, earliest on ties.
std::size_t best_index(std::span<const core::Individual> pop);

} // namespace lmx::evolve
