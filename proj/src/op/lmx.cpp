#include "lmx/op/lmx.hpp"

#include <vector>

#include "lmx/core/error.hpp"

namespace lmx::op {

LmxResult lmx(std::span<const core::Individual> parents, backend::CompletionEngine& engine,
              const PromptTemplate& tmpl, const OffspringParser& parser, const backend::SamplingParams& params,
              core::RngStream& rng, LmxLogContext log)
{
    if (parents.empty()) {
        throw PreconditionError("lmx: no parents");
    }
    LmxResult result;
    std::vector<std::string> parent_text;
    parent_text.reserve(parents.size());
    for (const auto& p : parents) {
        parent_text.push_back(p.genotype());
    }

    try {
        result.prompt = format_prompt(parents, tmpl, rng);
    } catch (const BudgetExceeded& e) {
        result.skipped = std::string("budget-exceeded: ") + e.what();
    }

    // Always draw, so skipped calls consume the same randomness as live ones.
    const std::uint64_t call_seed = rng.next_u64();
    if (!result.skipped) {
        backend::CompletionRequest req;
        req.prompt = result.prompt;
        req.params = params;
        if (!req.params.seed) {
            req.params.seed = call_seed;
        }
        try {
            result.completion = engine.complete(req).text;
        } catch (const backend::EngineError& e) {
            result.skipped = std::string("engine-error: ") + e.what();
            result.engine_unreachable = e.retryable();
        }
    }

    if (!result.skipped) {
        std::string text = result.completion;
        if (tmpl.trailer && tmpl.trailer_mode == TrailerMode::forced_prefix) {
            text = *tmpl.trailer + text;
        }
        result.offspring = parse_offspring(text, parser, parent_text);
    }

    if (log.log) {
        log.log->lmx_call(log.generation, rng.label(), result.prompt, result.completion, result.offspring.children,
                          result.skipped.value_or(""));
    }
    return result;
}

} // namespace lmx::op
