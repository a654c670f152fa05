#include "lmx/binary/bitstring.hpp"

#include <algorithm>

#include "lmx/core/error.hpp"

namespace lmx::binary {

std::string encode_underscore(std::string_view bits)
{
    std::string out;
    out.reserve(bits.size() * 2);
    for (char c : bits) {
        out.push_back('_');
        out.push_back(c);
    }
    return out;
}

std::optional<std::string> decode_underscore(std::string_view text)
{
    if (text.empty() || text.size() % 2 != 0) {
        return std::nullopt;
    }
    std::string out;
    out.reserve(text.size() / 2);
    for (std::size_t i = 0; i < text.size(); i += 2) {
        if (text[i] != '_' || (text[i + 1] != '0' && text[i + 1] != '1')) {
            return std::nullopt;
        }
        out.push_back(text[i + 1]);
    }
    return out;
}

std::string encode(std::string_view bits, Codec codec)
{
    return codec == Codec::underscore ? encode_underscore(bits) : std::string(bits);
}

std::optional<std::string> decode(std::string_view text, Codec codec)
{
    if (codec == Codec::underscore) {
        return decode_underscore(text);
    }
    if (!is_bitstring(text)) {
        return std::nullopt;
    }
    return std::string(text);
}

bool is_bitstring(std::string_view s) noexcept
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

bool is_valid(std::string_view bits, const BitstringSpec& spec) noexcept
{
    return bits.size() == spec.length && is_bitstring(bits);
}

std::size_t onemax(std::string_view bits) noexcept
{
    return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), '1'));
}

std::size_t leading_ones(std::string_view bits) noexcept
{
    const auto first_zero = bits.find_first_not_of('1');
    return first_zero == std::string_view::npos ? bits.size() : first_zero;
}

std::size_t hamming(std::string_view a, std::string_view b)
{
    if (a.size() != b.size()) {
        throw PreconditionError("hamming: length mismatch");
    }
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d += a[i] != b[i] ? 1 : 0;
    }
    return d;
}

std::vector<std::string> neighborhood(std::string_view ref)
{
    std::vector<std::string> out;
    out.reserve(ref.size());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        std::string s(ref);
        s[i] = s[i] == '1' ? '0' : '1';
        out.push_back(std::move(s));
    }
    return out;
}

std::string random_bitstring(std::size_t length, core::RngStream& rng)
{
    std::string s(length, '0');
    for (auto& c : s) {
        c = rng.bernoulli(0.5) ? '1' : '0';
    }
    return s;
}

std::string one_point_crossover_mutate(std::string_view p1, std::string_view p2, double flip_prob,
                                       core::RngStream& rng)
{
    if (p1.size() != p2.size()) {
        throw PreconditionError("one_point_crossover_mutate: parent length mismatch");
    }
    if (!(flip_prob >= 0.0 && flip_prob <= 1.0)) {
        throw PreconditionError("one_point_crossover_mutate: flip_prob outside [0, 1]");
    }
    const std::size_t L = p1.size();
    std::string child(p1);
    if (L >= 2) {
        const std::size_t cut = 1 + rng.uniform_index(L - 1);
        std::copy(p2.begin() + static_cast<std::ptrdiff_t>(cut), p2.end(), child.begin() + static_cast<std::ptrdiff_t>(cut));
    }
    for (auto& c : child) {
        if (rng.bernoulli(flip_prob)) {
            c = c == '1' ? '0' : '1';
        }
    }
    return child;
}

} // namespace lmx::binary
