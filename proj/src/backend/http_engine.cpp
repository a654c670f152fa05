#include "lmx/backend/http_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "lmx/core/error.hpp"

namespace lmx::backend {

using nlohmann::json;

namespace {

FinishReason parse_finish(const json& choice)
{
    if (!choice.contains("finish_reason") || choice["finish_reason"].is_null()) {
        return FinishReason::stop_sequence;
    }
    const auto r = choice["finish_reason"].get<std::string>();
    if (r == "length") {
        return FinishReason::length;
    }
    if (r == "error") {
        return FinishReason::error;
    }
    return FinishReason::stop_sequence;
}

std::optional<std::vector<TokenLogprob>> parse_logprobs(const json& choice)
{
    if (!choice.contains("logprobs") || choice["logprobs"].is_null()) {
        return std::nullopt;
    }
    const auto& lp = choice["logprobs"];
    const auto& tokens = lp.at("tokens");
    const auto& values = lp.at("token_logprobs");
    std::vector<TokenLogprob> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        TokenLogprob t;
        t.token = tokens[i].get<std::string>();
        t.logprob = values.at(i).is_null() ? -std::numeric_limits<double>::infinity() : values[i].get<double>();
        if (lp.contains("top_logprobs") && lp["top_logprobs"].is_array() && i < lp["top_logprobs"].size()) {
            const auto& top = lp["top_logprobs"][i];
            if (top.is_object()) {
                for (const auto& [tok, v] : top.items()) {
                    t.top.push_back({tok, v.get<double>()});
                }
                std::stable_sort(t.top.begin(), t.top.end(),
                                 [](const auto& a, const auto& b) { return a.logprob > b.logprob; });
            }
        }
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace

HttpEngine::HttpEngine(HttpEngineConfig config) : config_(std::move(config))
{
    const auto& url = config_.endpoint;
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("engine.endpoint must be an absolute URL (got '" + url + "')");
    }
    const auto path_start = url.find('/', scheme_end + 3);
    scheme_host_port_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/v1/completions" : url.substr(path_start);
    if (url.compare(0, scheme_end, "http") != 0) {
        throw ConfigError("engine.endpoint: only http:// endpoints are supported");
    }
}

CompletionResponse HttpEngine::complete(const CompletionRequest& req)
{
    if (req.prompt.empty()) {
        throw EngineError("http: empty prompt", false);
    }
    json body{{"prompt", req.prompt},
              {"max_tokens", req.params.max_new_tokens},
              {"temperature", req.params.temperature},
              {"top_p", req.params.top_p},
              {"stop", req.params.stop}};
    if (!config_.model.empty()) {
        body["model"] = config_.model;
    }
    if (req.params.top_k) {
        body["top_k"] = *req.params.top_k;
    }
    if (req.want_logprobs) {
        body["logprobs"] = req.logprob_top_n;
    }
    if (req.params.seed) {
        body["seed"] = *req.params.seed;
    }
    const std::string payload = body.dump();

    httplib::Headers headers;
    if (config_.authorization) {
        headers.emplace("Authorization", *config_.authorization);
    }

    std::string last_error;
    auto backoff = config_.initial_backoff;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(backoff);
            backoff *= 2;
        }
        httplib::Client client(scheme_host_port_);
        client.set_connection_timeout(config_.timeout);
        client.set_read_timeout(config_.timeout);
        client.set_write_timeout(config_.timeout);
        auto res = client.Post(path_, headers, payload, "application/json");
        if (!res) {
            last_error = "transport failure: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "server error " + std::to_string(res->status) + ": " + res->body;
            continue;
        }
        if (res->status != 200) {
            throw EngineError("http " + std::to_string(res->status) + ": " + res->body, false);
        }
        try {
            const auto j = json::parse(res->body);
            const auto& choice = j.at("choices").at(0);
            CompletionResponse out;
            out.text = choice.at("text").get<std::string>();
            out.finish_reason = parse_finish(choice);
            out.token_logprobs = parse_logprobs(choice);
            if (apply_stop_sequences(out.text, req.params.stop)) {
                out.finish_reason = FinishReason::stop_sequence;
            }
            return out;
        } catch (const json::exception& e) {
            throw EngineError(std::string("http: malformed completion response: ") + e.what(), false);
        }
    }
    throw EngineError("http: giving up after " + std::to_string(config_.max_retries) + " retries (" + last_error + ")",
                      true);
}

NextTokenDistribution HttpEngine::next_token_distribution(std::string_view prefix,
                                                          std::span<const std::string> candidates,
                                                          double temperature)
{
    if (!config_.supports_logprobs) {
        throw CapabilityError("engine 'http' is configured without logprobs support");
    }
    if (candidates.empty()) {
        throw PreconditionError("next_token_distribution: no candidates");
    }
    CompletionRequest req;
    req.prompt = std::string(prefix);
    req.params.temperature = 1.0;
    req.params.max_new_tokens = 1;
    req.want_logprobs = true;
    req.logprob_top_n = logprob_top_n;
    auto resp = complete(req);
    if (!resp.token_logprobs || resp.token_logprobs->empty()) {
        throw CapabilityError("engine 'http' returned no logprobs; the server does not support them");
    }
    const auto& top = resp.token_logprobs->front().top;
    if (top.empty()) {
        throw CapabilityError("engine 'http' returned no top_logprobs alternatives");
    }
    double floor = std::numeric_limits<double>::infinity();
    for (const auto& alt : top) {
        floor = std::min(floor, alt.logprob);
    }

    NextTokenDistribution dist;
    dist.prefix = std::string(prefix);
    std::map<std::string, double> logprobs;
    for (const auto& c : candidates) {
        auto it = std::find_if(top.begin(), top.end(), [&](const auto& a) { return a.token == c; });
        if (it == top.end()) {
            logprobs[c] = floor;
            dist.approximated = true;
        } else {
            logprobs[c] = it->logprob;
        }
    }
    dist.candidates = tempered_softmax(logprobs, temperature);
    return dist;
}

} // namespace lmx::backend
