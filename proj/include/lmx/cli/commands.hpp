#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace lmx::cli {

enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kInputError = 2,
    kEngineError = 3,
    kCapabilityError = 4,
};

struct CommandOptions {
    std::filesystem::path config;
    std::optional<std::uint64_t> seed;
    std::optional<std::filesystem::path> out_dir;
    bool no_plot = false;
    std::optional<std::string> engine_override;
    std::optional<std::filesystem::path> parents_file;  // variation only
};

// Each command prints a short summary to `out`, diagnostics to `err`, and
// returns an ExitCode.
int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_variation(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_eda_compare(const CommandOptions& opts, std::ostream& out, std::ostream& err);
int cmd_order_bias(const CommandOptions& opts, std::ostream& out, std::ostream& err);

} // namespace lmx::cli
