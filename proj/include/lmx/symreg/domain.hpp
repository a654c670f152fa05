#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lmx/core/domain.hpp"
#include "lmx/evolve/variation.hpp"
#include "lmx/op/offspring.hpp"
#include "lmx/op/prompt.hpp"
#include "lmx/symreg/dataset.hpp"
#include "lmx/symreg/expr.hpp"

namespace lmx::symreg {

inline constexpr const char* kPromptHeader = "Below are 10 expressions that approximate the dataset:";

struct SymRegOptions {
    std::size_t var_count = 2;
    std::size_t initial_size = 1000;
};

/// Genotypes are expression text; candidates are parsed and folded, and the
/// folded text is the stored genotype. Fitness is train-split R^2.
/// The descriptor is the expression size.
class SymRegDomain final : public core::Domain {
public:
    SymRegDomain(RegressionDataset data, std::vector<Expr> benchmarks, SymRegOptions options);

    std::vector<std::string> initial_genotypes(core::RngStream& rng) const override;
    std::optional<std::string> canonicalize(std::string_view text) const override;
    std::optional<double> fitness(std::string_view genotype) const override;
    std::optional<std::vector<double>> descriptor(std::string_view genotype) const override;
    std::optional<std::string> sample_prior(core::RngStream& rng) const override;

    [[nodiscard]] std::optional<double> test_r2(std::string_view genotype) const;
    [[nodiscard]] const RegressionDataset& data() const noexcept { return data_; }

private:
    RegressionDataset data_;
    Matrix train_x_, test_x_;
    std::vector<double> train_y_, test_y_;
    std::vector<Expr> benchmarks_;
    SymRegOptions options_;
};

// Header line, newline items, random order.
op::PromptTemplate symreg_template();

/// Subtree-crossover GP baseline: two random parents, one child per call.
class SubtreeVariation final : public evolve::VariationOperator {
public:
    std::vector<evolve::Proposal> vary(std::span<const core::Individual> pool, core::RngStream& rng,
                                       evolve::VariationContext& ctx) override;
    [[nodiscard]] core::Provenance provenance() const noexcept override { return core::Provenance::baseline; }
};

} // namespace lmx::symreg
