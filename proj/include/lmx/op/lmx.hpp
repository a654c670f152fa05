#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "lmx/backend/engine.hpp"
#include "lmx/core/individual.hpp"
#include "lmx/core/rng.hpp"
#include "lmx/core/run_log.hpp"
#include "lmx/op/offspring.hpp"
#include "lmx/op/prompt.hpp"

namespace lmx::op {

struct LmxResult {
    std::string prompt;
    std::string completion;
    ParsedOffspring offspring;
    // Set when the call produced nothing because of the budget or an engine error.
    std::optional<std::string> skipped;
    // The engine gave up on a retryable failure (transport, 5xx).
    bool engine_unreachable = false;
};

struct LmxLogContext {
    core::RunLog* log = nullptr;
    std::size_t generation = 0;
};

/// Language model crossover: parse(complete(format(parents))).
///
/// Budget overruns and engine failures do not throw; they come back as a
/// skipped call with no children. Unless params.seed pins it, the request
/// seed is drawn from `rng`, so mock engines stay reproducible.
LmxResult lmx(std::span<const core::Individual> parents, backend::CompletionEngine& engine,
              const PromptTemplate& tmpl, const OffspringParser& parser, const backend::SamplingParams& params,
              core::RngStream& rng, LmxLogContext log = {});

} // namespace lmx::op
