#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lmx/analysis/eda.hpp"
#include "lmx/analysis/ordering.hpp"
#include "lmx/backend/engine.hpp"
#include "lmx/backend/replay.hpp"
#include "lmx/binary/bitstring.hpp"
#include "lmx/binary/domain.hpp"
#include "lmx/core/config.hpp"
#include "lmx/evolve/map_elites.hpp"
#include "lmx/op/prompt.hpp"

namespace lmx::cli {

struct EngineSpec {
    std::string kind = "umda-mock";  // http | umda-mock | subtree-mock | replay
    std::string label;               // name in sweep outputs; defaults to model or kind
    // http
    std::string endpoint;
    std::string model;
    std::optional<std::string> auth_env;  // environment variable holding the API key
    int max_retries = 3;
    int timeout_s = 120;
    bool supports_logprobs = true;
    // umda-mock
    std::size_t children_per_call = 3;
    std::vector<std::string> fallback_parents;
    // replay
    std::filesystem::path recording;
    backend::ReplayMatch replay_match = backend::ReplayMatch::exact;

    [[nodiscard]] std::string display_name() const;
};

struct DomainSpec {
    std::string kind = "binary";  // binary | symreg
    // binary
    std::size_t length = 10;
    binary::FitnessKind fitness = binary::FitnessKind::onemax;
    binary::Codec codec = binary::Codec::plain;
    double flip_probability = 0.1;
    // symreg
    std::filesystem::path dataset;
    std::filesystem::path benchmarks;
    double train_fraction = 0.75;
    std::uint64_t split_seed = 0;
    std::size_t var_count = 2;
    // both; 0 = domain default (binary: population size, symreg: 1000)
    std::size_t initial_size = 0;
};

struct LoopSpec {
    std::string kind = "ga";         // ga | map-elites
    std::string variation = "lmx";   // lmx | baseline
    core::RunConfig run;
    evolve::MapElitesConfig map;
};

struct TemplateOverrides {
    std::optional<std::string> header;
    std::optional<std::string> item_prefix;
    std::optional<std::string> delimiter;
    std::optional<std::string> trailer;
    std::optional<op::TrailerMode> trailer_mode;
    std::optional<op::Ordering> ordering;
    std::optional<std::size_t> char_budget;

    void apply(op::PromptTemplate& t) const;
};

struct OutputSpec {
    std::filesystem::path directory = "out";
    bool plot = true;
    bool record = false;  // save engine exchanges as recording.jsonl
};

struct VariationSpec {
    std::filesystem::path parents_file;
    std::size_t min_parents = 2;
    std::size_t max_parents = 5;
    std::size_t trials = 20;
    std::size_t children_per_trial = 3;
    std::vector<EngineSpec> sweep_engines;
};

struct ExperimentConfig {
    std::filesystem::path source;  // config file, for resolving relative paths
    std::uint64_t seed = 0;
    EngineSpec engine;
    DomainSpec domain;
    LoopSpec loop;
    TemplateOverrides prompt_template;
    backend::SamplingParams sampling;
    OutputSpec output;
    VariationSpec variation;
    analysis::EdaCompareOptions eda_compare;
    analysis::OrderingBiasOptions order_bias;

    // Relative paths are taken from the config file's directory.
    [[nodiscard]] std::filesystem::path resolve(const std::filesystem::path& p) const;
};

// Strict parse: unknown keys and ill-typed values throw ConfigError with
// "<source>:<line>: ..." diagnostics.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& source = "<config>");
ExperimentConfig load_config(const std::filesystem::path& path);

// `override_text` is either an engine kind ("umda-mock") or a JSON object
// merged over the engine section.
ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& source,
                              std::string_view engine_override);

std::unique_ptr<backend::CompletionEngine> make_engine(const EngineSpec& spec, const ExperimentConfig& config);

} // namespace lmx::cli
