#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lmx/backend/engine.hpp"
#include "lmx/binary/bitstring.hpp"
#include "lmx/core/rng.hpp"
#include "lmx/core/run_log.hpp"
#include "lmx/op/prompt.hpp"

namespace lmx::analysis {

struct MarginalDistribution {
    std::vector<double> p_one;
};

// Relative frequency of '1' per position. Throws PreconditionError for an
// empty or ragged parent set.
MarginalDistribution umda_marginals(std::span<const std::string> parents);

/// Per-position P('1') implied by an engine prompted with the parents.
///
/// The parents are formatted in random order. For each position the engine
/// is asked for the distribution over {"0", "1"} given the prompt plus the
/// offspring prefix committed so far; the more likely bit (ties to '0') is
/// then committed. With a log, every query is recorded together with the
/// committed prefix and the engine's approximation flag.
MarginalDistribution lmx_marginals(std::span<const std::string> parents, backend::CompletionEngine& engine,
                                   const op::PromptTemplate& tmpl, binary::Codec codec, core::RngStream& rng,
                                   double temperature = 1.0, core::RunLog* log = nullptr);

// Mean over positions of |a_j - b_j|. Throws PreconditionError on length mismatch.
double mean_abs_diff(const MarginalDistribution& a, const MarginalDistribution& b);

struct EdaCompareRow {
    std::size_t parents = 0;
    double mean = 0.0;
    double stddev = 0.0;  // population standard deviation over repeats
    std::vector<double> samples;
};

struct EdaCompareOptions {
    std::size_t length = 6;
    std::vector<std::size_t> parent_counts{2, 4, 8, 16, 32};
    std::size_t repeats = 20;
    binary::Codec codec = binary::Codec::plain;
    double temperature = 1.0;
    core::RunLog* log = nullptr;
};

// Per repeat: draw per-bit probabilities from U[0,1], then for each parent
// count sample that many parents and compare UMDA with LMX marginals.
// Repeats run on separate labeled streams.
std::vector<EdaCompareRow> eda_compare_experiment(const EdaCompareOptions& options, backend::CompletionEngine& engine,
                                                  const op::PromptTemplate& tmpl, const core::RngStream& rng);

std::string eda_compare_csv(const std::vector<EdaCompareRow>& rows);

} // namespace lmx::analysis
