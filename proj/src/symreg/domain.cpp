#include "lmx/symreg/domain.hpp"

#include <cmath>

#include "lmx/core/error.hpp"
#include "lmx/symreg/benchmarks.hpp"
#include "lmx/symreg/crossover.hpp"
#include "lmx/symreg/kernels.hpp"
#include "lmx/symreg/parser.hpp"
#include "lmx/symreg/simplify.hpp"

namespace lmx::symreg {

namespace {

bool has_variance(const std::vector<double>& y)
{
    for (double v : y) {
        if (v != y.front()) {
            return true;
        }
    }
    return false;
}

std::optional<double> score(std::string_view genotype, const Matrix& X, const std::vector<double>& y)
{
    auto e = parse_expression(genotype);
    if (!e) {
        return std::nullopt;
    }
    auto y_hat = evaluate(*e, X);
    if (!y_hat) {
        return std::nullopt;
    }
    const double v = r2(y, *y_hat);
    if (!std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

} // namespace

SymRegDomain::SymRegDomain(RegressionDataset data, std::vector<Expr> benchmarks, SymRegOptions options)
    : data_(std::move(data)), benchmarks_(std::move(benchmarks)), options_(options)
{
    data_.validate();
    if (options_.var_count == 0) {
        throw ConfigError("domain.var_count must be positive");
    }
    if (benchmarks_.empty()) {
        throw ConfigError("symbolic regression needs at least one benchmark expression");
    }
    train_x_ = data_.rows(data_.train);
    test_x_ = data_.rows(data_.test);
    train_y_ = data_.targets(data_.train);
    test_y_ = data_.targets(data_.test);
    if (train_y_.size() < 2 || !has_variance(train_y_)) {
        throw ConfigError("training targets need at least two rows and nonzero variance");
    }
}

std::vector<std::string> SymRegDomain::initial_genotypes(core::RngStream& rng) const
{
    std::vector<std::string> out;
    out.reserve(options_.initial_size);
    for (const auto& e : seed_population(benchmarks_, options_.initial_size, options_.var_count, rng)) {
        out.push_back(to_string(simplify(e)));
    }
    return out;
}

std::optional<std::string> SymRegDomain::canonicalize(std::string_view text) const
{
    auto e = parse_expression(text);
    if (!e) {
        return std::nullopt;
    }
    return to_string(simplify(*e));
}

std::optional<double> SymRegDomain::fitness(std::string_view genotype) const
{
    return score(genotype, train_x_, train_y_);
}

std::optional<std::vector<double>> SymRegDomain::descriptor(std::string_view genotype) const
{
    auto e = parse_expression(genotype);
    if (!e) {
        return std::nullopt;
    }
    return std::vector<double>{static_cast<double>(expression_size(*e))};
}

std::optional<std::string> SymRegDomain::sample_prior(core::RngStream& rng) const
{
    return to_string(simplify(sample_benchmark(benchmarks_, options_.var_count, rng)));
}

std::optional<double> SymRegDomain::test_r2(std::string_view genotype) const
{
    if (test_y_.size() < 2 || !has_variance(test_y_)) {
        return std::nullopt;
    }
    return score(genotype, test_x_, test_y_);
}

op::PromptTemplate symreg_template()
{
    op::PromptTemplate t;
    t.header = kPromptHeader;
    t.ordering = op::Ordering::random;
    return t;
}

std::vector<evolve::Proposal> SubtreeVariation::vary(std::span<const core::Individual> pool, core::RngStream& rng,
                                                     evolve::VariationContext& ctx)
{
    if (pool.empty()) {
        throw PreconditionError("subtree crossover needs a non-empty parent pool");
    }
    const auto& a = pool[rng.uniform_index(pool.size())];
    const auto& b = pool[rng.uniform_index(pool.size())];
    auto p1 = parse_expression(a.genotype());
    auto p2 = parse_expression(b.genotype());
    ++ctx.proposed;
    if (!p1 || !p2) {
        ++ctx.rejected;
        return {};
    }
    return {evolve::Proposal{to_string(subtree_crossover(*p1, *p2, rng)), core::Provenance::baseline}};
}

} // namespace lmx::symreg
