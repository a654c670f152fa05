#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace lmx::core {

// Stable 64-bit key for a (seed, label) pair. Platform independent.
std::uint64_t stream_key(std::uint64_t seed, std::string_view label);

/// Named, splittable random stream.
///
/// Two streams built from the same seed and label produce the same sequence.
/// Consumers each own a stream with their own label, so adding a consumer
/// never shifts the draws seen by another one.
class RngStream {
public:
    using engine_type = std::mt19937_64;

    RngStream(std::uint64_t seed, std::string label);

    [[nodiscard]] RngStream derive(std::string_view sublabel) const;

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] const std::string& label() const noexcept { return label_; }

    std::uint64_t next_u64() { return engine_(); }
    // Uniform in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);
    double uniform01();
    double uniform(double lo, double hi);
    bool bernoulli(double p);

    engine_type& engine() noexcept { return engine_; }

private:
    std::uint64_t seed_;
    std::string label_;
    engine_type engine_;
};

} // namespace lmx::core
