#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "lmx/backend/engine.hpp"
#include "lmx/core/domain.hpp"
#include "lmx/core/individual.hpp"
#include "lmx/core/rng.hpp"
#include "lmx/core/run_log.hpp"
#include "lmx/op/offspring.hpp"
#include "lmx/op/prompt.hpp"

namespace lmx::evolve {

struct Proposal {
    std::string genotype;
    core::Provenance provenance;
};

struct VariationContext {
    core::RunLog* log = nullptr;
    std::size_t generation = 0;
    std::size_t proposed = 0;  // candidate lines produced
    std::size_t rejected = 0;  // failed parsing/validation
    std::size_t skipped_calls = 0;
};

class VariationOperator {
public:
    virtual ~VariationOperator() = default;
    // One application of the operator to parents drawn from `pool`.
    virtual std::vector<Proposal> vary(std::span<const core::Individual> pool, core::RngStream& rng,
                                       VariationContext& ctx) = 0;
    [[nodiscard]] virtual core::Provenance provenance() const noexcept = 0;
};

/// LMX as a variation operator: k parents drawn without replacement from the
/// pool (all of it when smaller), formatted, completed and parsed.
///
/// Engine errors skip the call, but after `kMaxUnreachable` consecutive calls
/// whose retries were exhausted the engine is taken to be down and a
/// retryable EngineError is thrown.
class LmxVariation final : public VariationOperator {
public:
    LmxVariation(backend::CompletionEngine& engine, const core::Domain& domain, op::PromptTemplate tmpl,
                 backend::SamplingParams params, std::size_t parents_per_call, std::size_t offspring_cap);

    std::vector<Proposal> vary(std::span<const core::Individual> pool, core::RngStream& rng,
                               VariationContext& ctx) override;
    [[nodiscard]] core::Provenance provenance() const noexcept override { return core::Provenance::lmx; }

    [[nodiscard]] op::OffspringParser& parser() noexcept { return parser_; }
    [[nodiscard]] const op::PromptTemplate& prompt_template() const noexcept { return tmpl_; }

    static constexpr std::size_t kMaxUnreachable = 3;

private:
    backend::CompletionEngine& engine_;
    op::PromptTemplate tmpl_;
    op::OffspringParser parser_;
    backend::SamplingParams params_;
    std::size_t parents_per_call_;
    std::size_t unreachable_run_ = 0;
};

// Uniform sample of min(k, n) distinct indices in [0, n), in draw order.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, core::RngStream& rng);

} // namespace lmx::evolve
