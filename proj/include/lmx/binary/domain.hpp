#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lmx/binary/bitstring.hpp"
#include "lmx/core/domain.hpp"
#include "lmx/evolve/variation.hpp"
#include "lmx/op/prompt.hpp"

namespace lmx::binary {

enum class FitnessKind { onemax, leading_ones };

/// Fixed-length bitstrings with uniform i.i.d. initialization.
///
/// The descriptor is the fraction of adjacent positions whose bits differ,
/// which gives MAP-Elites a one-dimensional behavior space in [0, 1].
class BinaryDomain final : public core::Domain {
public:
    BinaryDomain(BitstringSpec spec, FitnessKind kind, std::size_t initial_size);

    std::vector<std::string> initial_genotypes(core::RngStream& rng) const override;
    std::optional<std::string> canonicalize(std::string_view text) const override;
    std::optional<double> fitness(std::string_view genotype) const override;
    std::optional<std::vector<double>> descriptor(std::string_view genotype) const override;
    std::string encode_for_prompt(std::string_view genotype) const override;
    std::optional<std::string> decode_from_completion(std::string_view text) const override;

    [[nodiscard]] const BitstringSpec& spec() const noexcept { return spec_; }

private:
    BitstringSpec spec_;
    FitnessKind kind_;
    std::size_t initial_size_;
};

// Newline-separated items, random order, codec-aware encoding.
op::PromptTemplate binary_template(Codec codec);

/// Baseline: two parents drawn independently from the pool, one-point
/// crossover, then per-bit flips. One child per call.
class OnePointVariation final : public evolve::VariationOperator {
public:
    explicit OnePointVariation(double flip_prob = 0.1) : flip_prob_(flip_prob) {}

    std::vector<evolve::Proposal> vary(std::span<const core::Individual> pool, core::RngStream& rng,
                                       evolve::VariationContext& ctx) override;
    [[nodiscard]] core::Provenance provenance() const noexcept override { return core::Provenance::baseline; }

private:
    double flip_prob_;
};

} // namespace lmx::binary
