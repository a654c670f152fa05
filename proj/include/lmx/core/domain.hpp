#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lmx/core/rng.hpp"

namespace lmx::core {

/// Problem definition the evolution loops are generic over.
///
/// Genotypes are plain text. Fitness is maximized; a domain that minimizes
/// negates internally. Implementations must be safe to call concurrently.
class Domain {
public:
    virtual ~Domain() = default;

    virtual std::vector<std::string> initial_genotypes(RngStream& rng) const = 0;

    // Normal form of a candidate, or nullopt when the text is not a valid genotype.
    virtual std::optional<std::string> canonicalize(std::string_view text) const = 0;

    // nullopt marks an unevaluable genotype.
    virtual std::optional<double> fitness(std::string_view genotype) const = 0;

    virtual std::optional<std::vector<double>> descriptor(std::string_view /*genotype*/) const { return std::nullopt; }

    // Fresh draw from the domain prior, when it has one.
    virtual std::optional<std::string> sample_prior(RngStream& /*rng*/) const { return std::nullopt; }

    // Text form a genotype takes inside a prompt, and its inverse.
    virtual std::string encode_for_prompt(std::string_view genotype) const { return std::string(genotype); }
    virtual std::optional<std::string> decode_from_completion(std::string_view text) const { return std::string(text); }
};

} // namespace lmx::core
