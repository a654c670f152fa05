#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lmx/backend/engine.hpp"
#include "lmx/binary/bitstring.hpp"
#include "lmx/core/rng.hpp"

namespace lmx::binary {

struct VariationSetup {
    Codec codec = Codec::plain;
    backend::SamplingParams params{};
};

struct VariationMetrics {
    double valid_pct = 0.0;       // valid offspring lines / offspring lines, in percent
    std::size_t novel_count = 0;  // distinct valid offspring not among the parents
    std::size_t offspring_lines = 0;
    std::size_t valid_lines = 0;
};

// Runs LMX `trials` times on one parent set. The first `children_per_trial`
// non-empty completion lines of each call are its offspring.
VariationMetrics variation_metrics(std::span<const std::string> parent_set, backend::CompletionEngine& engine,
                                   std::size_t trials, std::size_t children_per_trial, const VariationSetup& setup,
                                   core::RngStream& rng);

struct HeritabilityResult {
    // Hamming distance to the all-zeros string of each valid child.
    std::vector<std::size_t> from_ones_neighborhood;
    std::vector<std::size_t> from_zeros_neighborhood;
};

// Prompts built from `parents_per_prompt` members of neighborhood(1^L) or
// neighborhood(0^L), `trials` calls each.
HeritabilityResult heritability_experiment(std::size_t length, std::size_t parents_per_prompt, std::size_t trials,
                                           backend::CompletionEngine& engine, const VariationSetup& setup,
                                           core::RngStream& rng);

} // namespace lmx::binary
