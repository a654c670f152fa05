#pragma once

#include <cstddef>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lmx/core/individual.hpp"

namespace lmx::core {

/// JSONL run log. One object per line; keys are emitted in sorted order so
/// identical runs give byte-identical logs. A default-constructed log discards
/// everything.
class RunLog {
public:
    RunLog() = default;
    explicit RunLog(std::ostream& sink) : sink_(&sink) {}

    void evaluation(std::size_t generation, const Individual& ind, std::string_view stream);
    void selection(std::size_t generation, const Individual& ind, std::string_view stream);
    void lmx_call(std::size_t generation, std::string_view stream, std::string_view prompt,
                  std::string_view completion, const std::vector<std::string>& children,
                  std::string_view skipped_reason);
    void note(std::size_t generation, std::string_view event, std::string_view stream, nlohmann::json extra);

    void write(const nlohmann::json& record);

    [[nodiscard]] bool enabled() const noexcept { return sink_ != nullptr; }

private:
    std::ostream* sink_ = nullptr;
    std::mutex mutex_;
};

} // namespace lmx::core
