#include "lmx/backend/replay.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "lmx/core/error.hpp"
#include "lmx/core/io.hpp"

namespace lmx::backend {

ReplayEngine::ReplayEngine(std::vector<Exchange> recording, ReplayMatch match)
    : recording_(std::move(recording)), used_(recording_.size(), false), match_(match)
{
}

CompletionResponse ReplayEngine::complete(const CompletionRequest& req)
{
    std::lock_guard lock(mutex_);
    for (std::size_t i = 0; i < recording_.size(); ++i) {
        if (used_[i]) {
            continue;
        }
        if (match_ == ReplayMatch::exact && recording_[i].prompt != req.prompt) {
            continue;
        }
        used_[i] = true;
        CompletionResponse resp;
        resp.text = recording_[i].response;
        resp.finish_reason = FinishReason::stop_sequence;
        apply_stop_sequences(resp.text, req.params.stop);
        return resp;
    }
    std::string shown = req.prompt.substr(0, 80);
    throw ReplayMiss("replay miss: no unused recording for prompt \"" + shown + (req.prompt.size() > 80 ? "...\"" : "\""));
}

std::size_t ReplayEngine::remaining() const
{
    std::lock_guard lock(mutex_);
    std::size_t n = 0;
    for (bool u : used_) {
        n += u ? 0 : 1;
    }
    return n;
}

CompletionResponse RecordingEngine::complete(const CompletionRequest& req)
{
    auto resp = inner_.complete(req);
    std::lock_guard lock(mutex_);
    log_.push_back({req.prompt, resp.text});
    return resp;
}

std::vector<Exchange> RecordingEngine::exchanges() const
{
    std::lock_guard lock(mutex_);
    return log_;
}

void RecordingEngine::save_jsonl(const std::filesystem::path& path) const
{
    std::ostringstream out;
    for (const auto& e : exchanges()) {
        out << nlohmann::json{{"prompt", e.prompt}, {"response", e.response}}.dump() << '\n';
    }
    core::write_file_atomic(path, out.str());
}

std::unique_ptr<ReplayEngine> make_replay_engine(std::vector<Exchange> recording, ReplayMatch match)
{
    return std::make_unique<ReplayEngine>(std::move(recording), match);
}

std::vector<Exchange> load_recording(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open recording file " + path.string());
    }
    std::vector<Exchange> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(line);
            out.push_back({j.at("prompt").get<std::string>(), j.at("response").get<std::string>()});
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": bad recording entry: " + e.what());
        }
    }
    return out;
}

} // namespace lmx::backend
