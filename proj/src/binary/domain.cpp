#include "lmx/binary/domain.hpp"

#include "lmx/core/error.hpp"

namespace lmx::binary {

BinaryDomain::BinaryDomain(BitstringSpec spec, FitnessKind kind, std::size_t initial_size)
    : spec_(spec), kind_(kind), initial_size_(initial_size)
{
    if (spec_.length < 1) {
        throw ConfigError("domain.length must be >= 1");
    }
}

std::vector<std::string> BinaryDomain::initial_genotypes(core::RngStream& rng) const
{
    std::vector<std::string> out;
    out.reserve(initial_size_);
    for (std::size_t i = 0; i < initial_size_; ++i) {
        out.push_back(random_bitstring(spec_.length, rng));
    }
    return out;
}

std::optional<std::string> BinaryDomain::canonicalize(std::string_view text) const
{
    if (!is_valid(text, spec_)) {
        return std::nullopt;
    }
    return std::string(text);
}

std::optional<double> BinaryDomain::fitness(std::string_view genotype) const
{
    if (!is_valid(genotype, spec_)) {
        return std::nullopt;
    }
    return static_cast<double>(kind_ == FitnessKind::onemax ? onemax(genotype) : leading_ones(genotype));
}

std::optional<std::vector<double>> BinaryDomain::descriptor(std::string_view genotype) const
{
    if (!is_valid(genotype, spec_)) {
        return std::nullopt;
    }
    if (genotype.size() < 2) {
        return std::vector<double>{0.0};
    }
    std::size_t changes = 0;
    for (std::size_t i = 1; i < genotype.size(); ++i) {
        changes += genotype[i] != genotype[i - 1] ? 1 : 0;
    }
    return std::vector<double>{static_cast<double>(changes) / static_cast<double>(genotype.size() - 1)};
}

std::string BinaryDomain::encode_for_prompt(std::string_view genotype) const
{
    return encode(genotype, spec_.codec);
}

std::optional<std::string> BinaryDomain::decode_from_completion(std::string_view text) const
{
    return decode(text, spec_.codec);
}

op::PromptTemplate binary_template(Codec codec)
{
    op::PromptTemplate t;
    t.ordering = op::Ordering::random;
    if (codec == Codec::underscore) {
        t.encode = [](std::string_view g) { return encode_underscore(g); };
    }
    return t;
}

std::vector<evolve::Proposal> OnePointVariation::vary(std::span<const core::Individual> pool, core::RngStream& rng,
                                                      evolve::VariationContext& ctx)
{
    if (pool.empty()) {
        throw PreconditionError("one-point crossover needs a non-empty parent pool");
    }
    const auto& a = pool[rng.uniform_index(pool.size())].genotype();
    const auto& b = pool[rng.uniform_index(pool.size())].genotype();
    ++ctx.proposed;
    return {{one_point_crossover_mutate(a, b, flip_prob_, rng), core::Provenance::baseline}};
}

} // namespace lmx::binary
