#include "lmx/evolve/variation.hpp"

#include <numeric>

#include "lmx/core/error.hpp"
#include "lmx/op/lmx.hpp"

namespace lmx::evolve {

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, core::RngStream& rng)
{
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    k = std::min(k, n);
    // Partial Fisher-Yates.
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.uniform_index(n - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    return idx;
}

LmxVariation::LmxVariation(backend::CompletionEngine& engine, const core::Domain& domain, op::PromptTemplate tmpl,
                           backend::SamplingParams params, std::size_t parents_per_call, std::size_t offspring_cap)
    : engine_(engine), tmpl_(std::move(tmpl)), params_(std::move(params)), parents_per_call_(parents_per_call)
{
    if (parents_per_call_ < 1) {
        throw ConfigError("parents_per_crossover (k) must be >= 1");
    }
    if (!tmpl_.encode) {
        tmpl_.encode = [&domain](std::string_view g) { return domain.encode_for_prompt(g); };
    }
    parser_.item_prefix = tmpl_.item_prefix;
    parser_.split_delimiter = tmpl_.delimiter;
    parser_.max_children = offspring_cap;
    parser_.decode = [&domain](std::string_view t) { return domain.decode_from_completion(t); };
    parser_.validator = [&domain](std::string_view g) { return domain.canonicalize(g).has_value(); };
}

std::vector<Proposal> LmxVariation::vary(std::span<const core::Individual> pool, core::RngStream& rng,
                                         VariationContext& ctx)
{
    if (pool.empty()) {
        throw PreconditionError("lmx variation needs a non-empty parent pool");
    }
    std::vector<core::Individual> parents;
    for (std::size_t i : sample_without_replacement(pool.size(), parents_per_call_, rng)) {
        parents.push_back(pool[i]);
    }
    auto result = op::lmx(parents, engine_, tmpl_, parser_, params_, rng, {ctx.log, ctx.generation});
    if (result.skipped) {
        ++ctx.skipped_calls;
    }
    unreachable_run_ = result.engine_unreachable ? unreachable_run_ + 1 : 0;
    if (unreachable_run_ >= kMaxUnreachable) {
        throw backend::EngineError("engine unreachable (" + std::to_string(unreachable_run_) +
                                       " consecutive calls failed after retries): " + result.skipped.value_or(""),
                                   true);
    }
    ctx.proposed += result.offspring.considered;
    ctx.rejected += result.offspring.rejected;
    std::vector<Proposal> out;
    out.reserve(result.offspring.children.size());
    for (auto& c : result.offspring.children) {
        out.push_back({std::move(c), core::Provenance::lmx});
    }
    return out;
}

} // namespace lmx::evolve
