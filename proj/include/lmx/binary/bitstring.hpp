#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lmx/core/rng.hpp"

namespace lmx::binary {

enum class Codec { plain, underscore };

struct BitstringSpec {
    std::size_t length = 10;
    Codec codec = Codec::plain;
};

// "0011" -> "_0_0_1_1". Each bit becomes its own token for common tokenizers.
std::string encode_underscore(std::string_view bits);
// Inverse of encode_underscore; nullopt for anything that is not "_b" pairs.
std::optional<std::string> decode_underscore(std::string_view text);

std::string encode(std::string_view bits, Codec codec);
std::optional<std::string> decode(std::string_view text, Codec codec);

// Non-empty and only '0'/'1'.
bool is_bitstring(std::string_view s) noexcept;
bool is_valid(std::string_view bits, const BitstringSpec& spec) noexcept;

std::size_t onemax(std::string_view bits) noexcept;
std::size_t leading_ones(std::string_view bits) noexcept;
std::size_t hamming(std::string_view a, std::string_view b);

// All strings at Hamming distance exactly one from `ref`, flipping position 0 first.
std::vector<std::string> neighborhood(std::string_view ref);

std::string random_bitstring(std::size_t length, core::RngStream& rng);

// Cut uniform in [1, L-1], child = p1[:cut] + p2[cut:], then independent bit flips.
std::string one_point_crossover_mutate(std::string_view p1, std::string_view p2, double flip_prob,
                                       core::RngStream& rng);

} // namespace lmx::binary
