#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "lmx/backend/engine.hpp"
#include "lmx/binary/bitstring.hpp"
#include "lmx/core/rng.hpp"
#include "lmx/op/prompt.hpp"

namespace lmx::analysis {

enum class SortKey { ones, leading_ones };

struct OrderingBiasOptions {
    std::size_t length = 10;
    SortKey sort_key = SortKey::ones;
    std::vector<op::Ordering> orders{op::Ordering::ascending, op::Ordering::descending, op::Ordering::random};
    std::size_t experiments = 100;
    std::size_t children_per_experiment = 10;
    std::size_t parents_per_experiment = 8;
    binary::Codec codec = binary::Codec::plain;
    backend::SamplingParams params{};
    std::size_t offspring_cap = 3;
};

struct OrderingHistogram {
    op::Ordering order;
    // counts[s] = children scoring s, s in [0, length]
    std::vector<std::size_t> counts;

    [[nodiscard]] std::size_t total() const;
    [[nodiscard]] double mean_score() const;
};

/// For each experiment a fresh random parent set is drawn; then for each
/// order in turn LMX is called on the sorted set until the child quota is
/// met (at most 2 * quota calls). Children are scored with the sort key.
std::vector<OrderingHistogram> ordering_bias_experiment(const OrderingBiasOptions& options,
                                                        backend::CompletionEngine& engine,
                                                        const core::RngStream& rng);

// order,score,count
std::string ordering_bias_csv(const std::vector<OrderingHistogram>& histograms);

std::string_view to_string(op::Ordering o) noexcept;
std::string_view to_string(SortKey k) noexcept;

} // namespace lmx::analysis
