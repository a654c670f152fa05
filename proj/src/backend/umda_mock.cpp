#include "lmx/backend/umda_mock.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "lmx/core/error.hpp"
#include "lmx/core/rng.hpp"

namespace lmx::backend {

namespace {

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            out.push_back(text.substr(start));
            break;
        }
        out.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return out;
}

std::vector<double> frequencies(const std::vector<std::string>& parents)
{
    std::vector<double> p(parents.front().size(), 0.0);
    for (const auto& s : parents) {
        for (std::size_t j = 0; j < s.size(); ++j) {
            p[j] += s[j] == '1' ? 1.0 : 0.0;
        }
    }
    for (auto& v : p) {
        v /= static_cast<double>(parents.size());
    }
    return p;
}

// P('1') after softmax at `temperature` over log(p), log(1-p).
double temper(double p_one, double temperature)
{
    if (temperature == 1.0) {
        return p_one;
    }
    const double ninf = -std::numeric_limits<double>::infinity();
    const std::map<std::string, double> lp{{"0", p_one < 1.0 ? std::log1p(-p_one) : ninf},
                                           {"1", p_one > 0.0 ? std::log(p_one) : ninf}};
    return tempered_softmax(lp, temperature).at("1");
}

} // namespace

UmdaMockEngine::UmdaMockEngine(binary::Codec codec, std::size_t children_per_call,
                               std::vector<std::string> fallback_parents)
    : codec_(codec), children_per_call_(children_per_call), fallback_parents_(std::move(fallback_parents))
{
}

UmdaMockEngine::Context UmdaMockEngine::parse(std::string_view text) const
{
    auto lines = split_lines(text);
    const std::string_view last = lines.back();
    lines.pop_back();

    std::vector<std::string> decoded;
    std::map<std::size_t, std::size_t> length_votes;
    for (auto line : lines) {
        if (auto bits = binary::decode(line, codec_)) {
            length_votes[bits->size()]++;
            decoded.push_back(std::move(*bits));
        }
    }

    std::vector<std::string> parents;
    if (!decoded.empty()) {
        std::size_t best_len = 0, best_votes = 0;
        for (auto [len, votes] : length_votes) {
            if (votes > best_votes) {
                best_len = len;
                best_votes = votes;
            }
        }
        for (auto& d : decoded) {
            if (d.size() == best_len) {
                parents.push_back(std::move(d));
            }
        }
    } else {
        parents = fallback_parents_;
    }
    if (parents.empty()) {
        throw EngineError("umda-mock: prompt contains no parent bitstrings", false);
    }

    Context ctx;
    ctx.p_one = frequencies(parents);

    // Bits already emitted on the partial last line. A trailing separator
    // means the next bit's underscore has been written already.
    std::string_view partial = last;
    if (codec_ == binary::Codec::underscore && !partial.empty() && partial.back() == '_') {
        partial.remove_suffix(1);
        ctx.separator_pending = true;
    }
    if (!partial.empty()) {
        auto bits = binary::decode(partial, codec_);
        if (!bits) {
            throw EngineError("umda-mock: malformed partial offspring", false);
        }
        ctx.partial = std::move(*bits);
    }
    ctx.position = ctx.partial.size();
    return ctx;
}

std::vector<double> UmdaMockEngine::marginals_for(std::string_view prompt) const
{
    return parse(prompt).p_one;
}

CompletionResponse UmdaMockEngine::complete(const CompletionRequest& req)
{
    if (req.prompt.empty()) {
        throw EngineError("umda-mock: empty prompt", false);
    }
    const Context ctx = parse(req.prompt);
    const std::uint64_t seed = req.params.seed ? *req.params.seed : core::stream_key(0, req.prompt);
    core::RngStream rng(seed, "umda-mock");

    const double temperature = req.params.temperature;
    auto draw = [&](std::size_t j) {
        const double p = ctx.p_one[j];
        if (temperature == 0.0) {
            return p > 0.5 ? '1' : '0';
        }
        return rng.uniform01() < temper(p, temperature) ? '1' : '0';
    };
    auto emit_bit = [&](std::string& out, char bit) {
        if (codec_ == binary::Codec::underscore) {
            out.push_back('_');
        }
        out.push_back(bit);
    };

    const std::size_t length = ctx.p_one.size();
    std::string text;
    for (std::size_t child = 0; child < children_per_call_; ++child) {
        const std::size_t start = child == 0 ? ctx.position : 0;
        for (std::size_t j = start; j < length; ++j) {
            const char bit = draw(j);
            if (child == 0 && j == start && ctx.separator_pending) {
                text.push_back(bit);
            } else {
                emit_bit(text, bit);
            }
        }
        text.push_back('\n');
    }

    CompletionResponse resp;
    resp.finish_reason = FinishReason::stop_sequence;
    apply_stop_sequences(text, req.params.stop);
    if (apply_length_limit(text, req.params.max_new_tokens)) {
        resp.finish_reason = FinishReason::length;
    }
    resp.text = std::move(text);
    return resp;
}

NextTokenDistribution UmdaMockEngine::next_token_distribution(std::string_view prefix,
                                                              std::span<const std::string> candidates,
                                                              double temperature)
{
    if (candidates.empty()) {
        throw PreconditionError("next_token_distribution: no candidates");
    }
    const Context ctx = parse(prefix);

    NextTokenDistribution dist;
    dist.prefix = std::string(prefix);
    const double p = ctx.position < ctx.p_one.size() ? temper(ctx.p_one[ctx.position], temperature) : 0.0;
    double total = 0.0;
    for (const auto& c : candidates) {
        double v = 0.0;
        if (ctx.position < ctx.p_one.size()) {
            v = c == "1" ? p : (c == "0" ? 1.0 - p : 0.0);
        }
        dist.candidates[c] = v;
        total += v;
    }
    for (auto& [tok, v] : dist.candidates) {
        v = total > 0.0 ? v / total : 1.0 / static_cast<double>(dist.candidates.size());
    }
    return dist;
}

std::unique_ptr<UmdaMockEngine> make_umda_mock(const std::vector<std::string>& parents, binary::Codec codec,
                                               std::size_t children_per_call)
{
    if (parents.empty()) {
        throw ConfigError("make_umda_mock: parent list is empty");
    }
    for (const auto& p : parents) {
        if (!binary::is_bitstring(p) || p.size() != parents.front().size()) {
            throw PreconditionError("make_umda_mock: parents must be equal-length bitstrings");
        }
    }
    return std::make_unique<UmdaMockEngine>(codec, children_per_call, parents);
}

} // namespace lmx::backend
