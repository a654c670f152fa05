#include "lmx/core/rng.hpp"

#include "lmx/core/error.hpp"

namespace lmx::core {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace

std::uint64_t stream_key(std::uint64_t seed, std::string_view label)
{
    return splitmix64(splitmix64(seed) ^ fnv1a(label));
}

RngStream::RngStream(std::uint64_t seed, std::string label)
    : seed_(seed), label_(std::move(label)), engine_(stream_key(seed_, label_))
{
}

RngStream RngStream::derive(std::string_view sublabel) const
{
    std::string l = label_;
    l += '/';
    l += sublabel;
    return RngStream(seed_, std::move(l));
}

std::size_t RngStream::uniform_index(std::size_t n)
{
    if (n == 0) {
        throw PreconditionError("uniform_index: empty range");
    }
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

double RngStream::uniform01()
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::uniform(double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

bool RngStream::bernoulli(double p)
{
    if (p <= 0.0) {
        return false;
    }
    if (p >= 1.0) {
        return true;
    }
    return uniform01() < p;
}

} // namespace lmx::core
