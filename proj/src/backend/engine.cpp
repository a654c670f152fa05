#include "lmx/backend/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lmx/core/error.hpp"

namespace lmx::backend {

void SamplingParams::validate() const
{
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        throw ConfigError("sampling.temperature must be a finite value >= 0");
    }
    if (top_k && *top_k < 1) {
        throw ConfigError("sampling.top_k must be >= 1");
    }
    if (!(top_p > 0.0 && top_p <= 1.0)) {
        throw ConfigError("sampling.top_p must lie in (0, 1]");
    }
    if (max_new_tokens < 1) {
        throw ConfigError("sampling.max_new_tokens must be >= 1");
    }
}

std::string_view to_string(FinishReason r) noexcept
{
    switch (r) {
    case FinishReason::stop_sequence: return "stop-sequence";
    case FinishReason::length: return "length";
    case FinishReason::error: return "error";
    }
    return "error";
}

double NextTokenDistribution::probability(const std::string& token) const
{
    auto it = candidates.find(token);
    return it == candidates.end() ? 0.0 : it->second;
}

NextTokenDistribution CompletionEngine::next_token_distribution(std::string_view, std::span<const std::string>, double)
{
    throw CapabilityError("engine '" + name() + "' does not provide per-token probabilities");
}

bool apply_stop_sequences(std::string& text, std::span<const std::string> stops)
{
    std::size_t cut = std::string::npos;
    for (const auto& s : stops) {
        if (s.empty()) {
            continue;
        }
        cut = std::min(cut, text.find(s));
    }
    if (cut == std::string::npos) {
        return false;
    }
    text.resize(cut);
    return true;
}

bool apply_length_limit(std::string& text, std::size_t max_chars)
{
    if (text.size() <= max_chars) {
        return false;
    }
    text.resize(max_chars);
    return true;
}

std::map<std::string, double> tempered_softmax(const std::map<std::string, double>& logprobs, double temperature)
{
    std::map<std::string, double> out;
    if (logprobs.empty()) {
        return out;
    }
    double top = -std::numeric_limits<double>::infinity();
    for (const auto& [tok, lp] : logprobs) {
        top = std::max(top, lp);
    }
    if (top == -std::numeric_limits<double>::infinity()) {
        const double u = 1.0 / static_cast<double>(logprobs.size());
        for (const auto& [tok, lp] : logprobs) {
            out[tok] = u;
        }
        return out;
    }
    if (temperature <= 0.0) {
        std::size_t winners = 0;
        for (const auto& [tok, lp] : logprobs) {
            winners += lp == top ? 1 : 0;
        }
        for (const auto& [tok, lp] : logprobs) {
            out[tok] = lp == top ? 1.0 / static_cast<double>(winners) : 0.0;
        }
        return out;
    }
    double total = 0.0;
    for (const auto& [tok, lp] : logprobs) {
        const double w = std::exp((lp - top) / temperature);
        out[tok] = w;
        total += w;
    }
    for (auto& [tok, w] : out) {
        w /= total;
    }
    return out;
}

} // namespace lmx::backend
