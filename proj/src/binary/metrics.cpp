#include "lmx/binary/metrics.hpp"

#include <set>

#include "lmx/binary/domain.hpp"
#include "lmx/core/error.hpp"
#include "lmx/op/lmx.hpp"

namespace lmx::binary {

namespace {

std::vector<core::Individual> as_individuals(std::span<const std::string> genotypes)
{
    std::vector<core::Individual> out;
    out.reserve(genotypes.size());
    for (const auto& g : genotypes) {
        out.emplace_back(g, core::Provenance::seed);
    }
    return out;
}

} // namespace

VariationMetrics variation_metrics(std::span<const std::string> parent_set, backend::CompletionEngine& engine,
                                   std::size_t trials, std::size_t children_per_trial, const VariationSetup& setup,
                                   core::RngStream& rng)
{
    if (trials < 1) {
        throw PreconditionError("variation_metrics: trials must be >= 1");
    }
    if (parent_set.empty()) {
        throw PreconditionError("variation_metrics: empty parent set");
    }
    const std::size_t length = parent_set.front().size();
    const auto parents = as_individuals(parent_set);
    const auto tmpl = binary_template(setup.codec);

    // Every line counts as an offspring line; validity is checked by hand so
    // invalid lines are not silently dropped from the denominator.
    op::OffspringParser parser;
    parser.max_children = children_per_trial;
    parser.min_chars = 1;
    parser.validator = {};
    parser.decode = {};

    VariationMetrics m;
    std::set<std::string> valid_children;
    for (std::size_t t = 0; t < trials; ++t) {
        auto result = op::lmx(parents, engine, tmpl, parser, setup.params, rng);
        for (const auto& line : result.offspring.children) {
            ++m.offspring_lines;
            auto bits = decode(line, setup.codec);
            if (bits && bits->size() == length) {
                ++m.valid_lines;
                valid_children.insert(*bits);
            }
        }
    }
    for (const auto& p : parent_set) {
        valid_children.erase(p);
    }
    m.novel_count = valid_children.size();
    m.valid_pct = m.offspring_lines == 0
                      ? 0.0
                      : 100.0 * static_cast<double>(m.valid_lines) / static_cast<double>(m.offspring_lines);
    return m;
}

HeritabilityResult heritability_experiment(std::size_t length, std::size_t parents_per_prompt, std::size_t trials,
                                           backend::CompletionEngine& engine, const VariationSetup& setup,
                                           core::RngStream& rng)
{
    const std::string zeros(length, '0');
    const std::string ones(length, '1');
    const auto tmpl = binary_template(setup.codec);
    op::OffspringParser parser;
    parser.decode = [codec = setup.codec](std::string_view t) { return decode(t, codec); };
    parser.validator = [length](std::string_view b) { return b.size() == length; };
    parser.min_chars = 1;

    HeritabilityResult out;
    auto run = [&](const std::string& ref, std::vector<std::size_t>& sink) {
        const auto hood = neighborhood(ref);
        for (std::size_t t = 0; t < trials; ++t) {
            std::vector<core::Individual> parents;
            for (std::size_t i = 0; i < parents_per_prompt; ++i) {
                parents.emplace_back(hood[rng.uniform_index(hood.size())], core::Provenance::seed);
            }
            for (const auto& child : op::lmx(parents, engine, tmpl, parser, setup.params, rng).offspring.children) {
                sink.push_back(hamming(child, zeros));
            }
        }
    };
    run(ones, out.from_ones_neighborhood);
    run(zeros, out.from_zeros_neighborhood);
    return out;
}

} // namespace lmx::binary
