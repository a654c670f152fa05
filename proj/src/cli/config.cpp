#include "lmx/cli/config.hpp"

#include <cstdlib>
#include <set>
#include <sstream>

#include "lmx/backend/http_engine.hpp"
#include "lmx/backend/subtree_mock.hpp"
#include "lmx/backend/umda_mock.hpp"
#include "lmx/core/error.hpp"
#include "lmx/core/io.hpp"

namespace lmx::cli {

using nlohmann::json;

namespace {

/// Raw config text plus the source name, for line-anchored messages.
class Source {
public:
    Source(std::string_view text, std::string name) : name_(std::move(name))
    {
        std::istringstream in{std::string(text)};
        std::string line;
        while (std::getline(in, line)) {
            lines_.push_back(line);
        }
    }

    // 1-based line of the first `"key":` at or after line `from`, or 0.
    [[nodiscard]] std::size_t line_of(std::string_view key, std::size_t from) const
    {
        const std::string quoted = "\"" + std::string(key) + "\"";
        for (std::size_t i = from == 0 ? 0 : from - 1; i < lines_.size(); ++i) {
            const auto pos = lines_[i].find(quoted);
            if (pos == std::string::npos) {
                continue;
            }
            const auto after = lines_[i].find_first_not_of(" \t", pos + quoted.size());
            if (after != std::string::npos && lines_[i][after] == ':') {
                return i + 1;
            }
        }
        return 0;
    }

    [[noreturn]] void fail(std::size_t line, const std::string& message) const
    {
        if (line > 0) {
            throw ConfigError(name_ + ":" + std::to_string(line) + ": " + message);
        }
        throw ConfigError(name_ + ": " + message);
    }

    [[nodiscard]] const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
    std::vector<std::string> lines_;
};

/// One JSON object being consumed. Keys that are never read are reported by finish().
class Section {
public:
    Section(const Source& src, const json& obj, std::string path, std::size_t line)
        : src_(src), obj_(obj), path_(std::move(path)), line_(line)
    {
        if (!obj_.is_object()) {
            src_.fail(line_, path_ + ": expected an object");
        }
    }

    [[nodiscard]] bool has(const std::string& key) const { return obj_.contains(key); }

    [[noreturn]] void fail(const std::string& key, const std::string& message) const
    {
        src_.fail(line_for(key), qualified(key) + ": " + message);
    }

    const json* take(const std::string& key)
    {
        used_.insert(key);
        auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    template <typename T>
    void number(const std::string& key, T& target)
    {
        const json* v = take(key);
        if (!v) {
            return;
        }
        if constexpr (std::is_floating_point_v<T>) {
            if (!v->is_number()) {
                fail(key, "expected a number");
            }
            target = v->get<T>();
        } else if constexpr (std::is_unsigned_v<T>) {
            if (!v->is_number_unsigned()) {
                fail(key, "expected a non-negative integer");
            }
            target = static_cast<T>(v->get<std::uint64_t>());
        } else {
            if (!v->is_number_integer()) {
                fail(key, "expected an integer");
            }
            target = v->get<T>();
        }
    }

    template <typename T>
    void optional_number(const std::string& key, std::optional<T>& target)
    {
        const json* v = take(key);
        if (!v || v->is_null()) {
            return;
        }
        used_.erase(key);
        T tmp{};
        number(key, tmp);
        target = tmp;
    }

    void boolean(const std::string& key, bool& target)
    {
        const json* v = take(key);
        if (!v) {
            return;
        }
        if (!v->is_boolean()) {
            fail(key, "expected true or false");
        }
        target = v->get<bool>();
    }

    void string(const std::string& key, std::string& target)
    {
        const json* v = take(key);
        if (!v) {
            return;
        }
        if (!v->is_string()) {
            fail(key, "expected a string");
        }
        target = v->get<std::string>();
    }

    void optional_string(const std::string& key, std::optional<std::string>& target)
    {
        const json* v = take(key);
        if (!v || v->is_null()) {
            return;
        }
        if (!v->is_string()) {
            fail(key, "expected a string");
        }
        target = v->get<std::string>();
    }

    void path(const std::string& key, std::filesystem::path& target)
    {
        std::string s;
        string(key, s);
        if (has(key)) {
            target = s;
        }
    }

    void strings(const std::string& key, std::vector<std::string>& target)
    {
        const json* v = take(key);
        if (!v) {
            return;
        }
        if (!v->is_array()) {
            fail(key, "expected a list of strings");
        }
        target.clear();
        for (const auto& e : *v) {
            if (!e.is_string()) {
                fail(key, "expected a list of strings");
            }
            target.push_back(e.get<std::string>());
        }
    }

    void counts(const std::string& key, std::vector<std::size_t>& target)
    {
        const json* v = take(key);
        if (!v) {
            return;
        }
        if (!v->is_array()) {
            fail(key, "expected a list of non-negative integers");
        }
        target.clear();
        for (const auto& e : *v) {
            if (!e.is_number_unsigned()) {
                fail(key, "expected a list of non-negative integers");
            }
            target.push_back(e.get<std::size_t>());
        }
    }

    template <typename E>
    void choice(const std::string& key, E& target, std::initializer_list<std::pair<const char*, E>> options)
    {
        const json* v = take(key);
        if (!v) {
            return;
        }
        std::string allowed;
        for (const auto& [name, value] : options) {
            if (v->is_string() && v->get<std::string>() == name) {
                target = value;
                return;
            }
            allowed += allowed.empty() ? "" : ", ";
            allowed += name;
        }
        fail(key, "expected one of: " + allowed);
    }

    Section child(const std::string& key)
    {
        const json* v = take(key);
        static const json empty = json::object();
        return Section(src_, v ? *v : empty, qualified(key), line_for(key));
    }

    std::vector<Section> children(const std::string& key)
    {
        const json* v = take(key);
        std::vector<Section> out;
        if (!v) {
            return out;
        }
        if (!v->is_array()) {
            fail(key, "expected a list of objects");
        }
        const std::size_t line = line_for(key);
        for (std::size_t i = 0; i < v->size(); ++i) {
            out.emplace_back(src_, (*v)[i], qualified(key) + "[" + std::to_string(i) + "]", line);
        }
        return out;
    }

    void finish() const
    {
        for (const auto& [key, value] : obj_.items()) {
            if (!used_.contains(key)) {
                src_.fail(line_for(key), "unknown key '" + key + "' in " + (path_.empty() ? "config" : path_));
            }
        }
    }

    [[nodiscard]] std::size_t line_for(const std::string& key) const
    {
        const std::size_t l = src_.line_of(key, line_);
        return l == 0 ? line_ : l;
    }

    [[nodiscard]] std::string qualified(const std::string& key) const
    {
        return path_.empty() ? key : path_ + "." + key;
    }

private:
    const Source& src_;
    const json& obj_;
    std::string path_;
    std::size_t line_;
    std::set<std::string> used_;
};

EngineSpec read_engine(Section s)
{
    EngineSpec e;
    s.choice<std::string>("kind", e.kind,
                          {{"http", "http"}, {"umda-mock", "umda-mock"}, {"subtree-mock", "subtree-mock"},
                           {"replay", "replay"}});
    s.string("label", e.label);
    s.string("endpoint", e.endpoint);
    s.string("model", e.model);
    s.optional_string("auth_env", e.auth_env);
    s.number("max_retries", e.max_retries);
    s.number("timeout_s", e.timeout_s);
    s.boolean("supports_logprobs", e.supports_logprobs);
    s.number("children_per_call", e.children_per_call);
    s.strings("fallback_parents", e.fallback_parents);
    s.path("recording", e.recording);
    s.choice("replay_match", e.replay_match,
             {{"exact", backend::ReplayMatch::exact}, {"sequential", backend::ReplayMatch::sequential}});
    if (e.kind == "http" && e.endpoint.empty()) {
        s.fail("endpoint", "required for the http engine");
    }
    if (e.kind == "replay" && e.recording.empty()) {
        s.fail("recording", "required for the replay engine");
    }
    if (e.max_retries < 0) {
        s.fail("max_retries", "must be >= 0");
    }
    if (e.timeout_s < 1) {
        s.fail("timeout_s", "must be >= 1");
    }
    if (e.children_per_call < 1) {
        s.fail("children_per_call", "must be >= 1");
    }
    s.finish();
    return e;
}

void read_domain(Section s, DomainSpec& d)
{
    s.choice<std::string>("kind", d.kind, {{"binary", "binary"}, {"symreg", "symreg"}});
    s.number("length", d.length);
    s.choice("fitness", d.fitness,
             {{"onemax", binary::FitnessKind::onemax}, {"leading_ones", binary::FitnessKind::leading_ones}});
    s.choice("codec", d.codec, {{"plain", binary::Codec::plain}, {"underscore", binary::Codec::underscore}});
    s.number("flip_probability", d.flip_probability);
    s.path("dataset", d.dataset);
    s.path("benchmarks", d.benchmarks);
    s.number("train_fraction", d.train_fraction);
    s.number("split_seed", d.split_seed);
    s.number("var_count", d.var_count);
    s.number("initial_size", d.initial_size);
    if (d.length < 1) {
        s.fail("length", "must be >= 1");
    }
    if (!(d.flip_probability >= 0.0 && d.flip_probability <= 1.0)) {
        s.fail("flip_probability", "must lie in [0, 1]");
    }
    if (!(d.train_fraction > 0.0 && d.train_fraction <= 1.0)) {
        s.fail("train_fraction", "must lie in (0, 1]");
    }
    if (d.var_count < 1) {
        s.fail("var_count", "must be >= 1");
    }
    if (d.kind == "symreg") {
        if (d.dataset.empty()) {
            s.fail("dataset", "required for the symreg domain");
        }
        if (d.benchmarks.empty()) {
            s.fail("benchmarks", "required for the symreg domain");
        }
    }
    s.finish();
}

void read_loop(Section s, LoopSpec& l)
{
    s.choice<std::string>("kind", l.kind, {{"ga", "ga"}, {"map-elites", "map-elites"}});
    s.choice<std::string>("variation", l.variation, {{"lmx", "lmx"}, {"baseline", "baseline"}});
    auto& r = l.run;
    s.number("population_size", r.population_size);
    s.number("parents_per_crossover", r.parents_per_crossover);
    s.number("generations", r.generations);
    s.number("prior_injection_probability", r.prior_injection_probability);
    s.number("offspring_cap", r.offspring_cap);
    s.choice("duplicates", r.duplicates,
             {{"allow", core::DuplicatePolicy::allow}, {"discard", core::DuplicatePolicy::discard}});
    if (s.has("selection")) {
        auto sel = s.child("selection");
        std::string kind = "truncation";
        sel.choice<std::string>("kind", kind, {{"truncation", "truncation"}, {"tournament", "tournament"}});
        if (kind == "tournament") {
            core::TournamentSelection t;
            sel.number("size", t.size);
            r.selection = t;
        } else {
            core::TruncationSelection t;
            sel.number("keep_fraction", t.keep_fraction);
            r.selection = t;
        }
        sel.finish();
    }

    auto& m = l.map;
    if (s.has("dims")) {
        m.dims.clear();
        for (auto d : s.children("dims")) {
            evolve::MapDimension dim;
            d.number("lower", dim.lower);
            d.number("upper", dim.upper);
            d.number("bins", dim.bins);
            if (dim.bins < 1) {
                d.fail("bins", "must be >= 1");
            }
            if (!(dim.lower < dim.upper)) {
                d.fail("upper", "must be greater than lower");
            }
            d.finish();
            m.dims.push_back(dim);
        }
    }
    s.number("qd_offset", m.qd_offset);
    s.number("evaluation_budget", m.evaluation_budget);
    s.number("checkpoint_every", m.checkpoint_every);
    s.choice("strategy", m.strategy,
             {{"uniform", evolve::ParentStrategy::uniform}, {"near", evolve::ParentStrategy::near}});
    s.number("near_radius", m.near_radius);
    if (m.checkpoint_every < 1) {
        s.fail("checkpoint_every", "must be >= 1");
    }
    s.finish();
}

void read_template(Section s, TemplateOverrides& t)
{
    s.optional_string("header", t.header);
    s.optional_string("item_prefix", t.item_prefix);
    s.optional_string("delimiter", t.delimiter);
    s.optional_string("trailer", t.trailer);
    if (s.has("trailer_mode")) {
        op::TrailerMode mode{};
        s.choice("trailer_mode", mode,
                 {{"literal", op::TrailerMode::literal}, {"forced_prefix", op::TrailerMode::forced_prefix}});
        t.trailer_mode = mode;
    }
    if (s.has("ordering")) {
        op::Ordering o{};
        s.choice("ordering", o,
                 {{"random", op::Ordering::random},
                  {"ascending", op::Ordering::ascending},
                  {"descending", op::Ordering::descending},
                  {"given", op::Ordering::given}});
        t.ordering = o;
    }
    s.optional_number("char_budget", t.char_budget);
    if (t.delimiter && t.delimiter->empty()) {
        s.fail("delimiter", "must not be empty");
    }
    s.finish();
}

void read_sampling(Section s, backend::SamplingParams& p)
{
    s.number("temperature", p.temperature);
    s.optional_number("top_k", p.top_k);
    s.number("top_p", p.top_p);
    s.number("max_new_tokens", p.max_new_tokens);
    s.strings("stop", p.stop);
    s.optional_number("seed", p.seed);
    try {
        p.validate();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        const auto dot = msg.find('.');
        const auto space = msg.find(' ');
        const std::string field = dot != std::string::npos && dot < space ? msg.substr(dot + 1, space - dot - 1) : "";
        s.fail(field, msg.substr(space + 1));
    }
    s.finish();
}

void read_output(Section s, OutputSpec& o)
{
    s.path("directory", o.directory);
    s.boolean("plot", o.plot);
    s.boolean("record", o.record);
    s.finish();
}

void read_variation(Section s, VariationSpec& v)
{
    s.path("parents_file", v.parents_file);
    s.number("min_parents", v.min_parents);
    s.number("max_parents", v.max_parents);
    s.number("trials", v.trials);
    s.number("children_per_trial", v.children_per_trial);
    for (auto e : s.children("sweep_engines")) {
        v.sweep_engines.push_back(read_engine(std::move(e)));
    }
    if (v.min_parents < 1) {
        s.fail("min_parents", "must be >= 1");
    }
    if (v.max_parents < v.min_parents) {
        s.fail("max_parents", "must be >= min_parents");
    }
    if (v.trials < 1) {
        s.fail("trials", "must be >= 1");
    }
    if (v.children_per_trial < 1) {
        s.fail("children_per_trial", "must be >= 1");
    }
    s.finish();
}

void read_eda(Section s, analysis::EdaCompareOptions& o)
{
    s.number("length", o.length);
    s.counts("parent_counts", o.parent_counts);
    s.number("repeats", o.repeats);
    s.number("temperature", o.temperature);
    if (o.length < 1) {
        s.fail("length", "must be >= 1");
    }
    if (o.repeats < 1) {
        s.fail("repeats", "must be >= 1");
    }
    if (o.parent_counts.empty()) {
        s.fail("parent_counts", "must not be empty");
    }
    for (auto c : o.parent_counts) {
        if (c < 1) {
            s.fail("parent_counts", "entries must be >= 1");
        }
    }
    if (!(o.temperature >= 0.0)) {
        s.fail("temperature", "must be >= 0");
    }
    s.finish();
}

void read_order_bias(Section s, analysis::OrderingBiasOptions& o)
{
    s.number("length", o.length);
    s.choice("sort_key", o.sort_key,
             {{"ones", analysis::SortKey::ones}, {"leading_ones", analysis::SortKey::leading_ones}});
    if (s.has("orders")) {
        std::vector<std::string> names;
        s.strings("orders", names);
        o.orders.clear();
        for (const auto& n : names) {
            if (n == "ascending") {
                o.orders.push_back(op::Ordering::ascending);
            } else if (n == "descending") {
                o.orders.push_back(op::Ordering::descending);
            } else if (n == "random") {
                o.orders.push_back(op::Ordering::random);
            } else {
                s.fail("orders", "unknown order '" + n + "' (ascending, descending, random)");
            }
        }
    }
    s.number("experiments", o.experiments);
    s.number("children_per_experiment", o.children_per_experiment);
    s.number("parents_per_experiment", o.parents_per_experiment);
    s.number("offspring_cap", o.offspring_cap);
    if (o.length < 1) {
        s.fail("length", "must be >= 1");
    }
    if (o.orders.empty()) {
        s.fail("orders", "must not be empty");
    }
    if (o.parents_per_experiment < 1) {
        s.fail("parents_per_experiment", "must be >= 1");
    }
    if (o.offspring_cap < 1) {
        s.fail("offspring_cap", "must be >= 1");
    }
    s.finish();
}

json apply_override(json doc, std::string_view engine_override)
{
    if (engine_override.empty()) {
        return doc;
    }
    const auto first = engine_override.find_first_not_of(" \t\n");
    if (first != std::string_view::npos && engine_override[first] == '{') {
        json patch;
        try {
            patch = json::parse(engine_override);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("--engine-override: ") + e.what());
        }
        if (!doc.contains("engine")) {
            doc["engine"] = json::object();
        }
        if (patch.contains("kind") && doc["engine"].value("kind", "") != patch["kind"]) {
            doc["engine"] = json::object();
        }
        doc["engine"].merge_patch(patch);
    } else {
        doc["engine"] = json{{"kind", std::string(engine_override)}};
    }
    return doc;
}

} // namespace

std::string EngineSpec::display_name() const
{
    if (!label.empty()) {
        return label;
    }
    if (!model.empty()) {
        return model;
    }
    return kind;
}

void TemplateOverrides::apply(op::PromptTemplate& t) const
{
    if (header) {
        t.header = header->empty() ? std::nullopt : header;
    }
    if (item_prefix) {
        t.item_prefix = *item_prefix;
    }
    if (delimiter) {
        t.delimiter = *delimiter;
    }
    if (trailer) {
        t.trailer = trailer->empty() ? std::nullopt : trailer;
    }
    if (trailer_mode) {
        t.trailer_mode = *trailer_mode;
    }
    if (ordering) {
        t.ordering = *ordering;
    }
    if (char_budget) {
        t.char_budget = *char_budget;
    }
}

std::filesystem::path ExperimentConfig::resolve(const std::filesystem::path& p) const
{
    if (p.empty() || p.is_absolute()) {
        return p;
    }
    return source.parent_path() / p;
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& source,
                              std::string_view engine_override)
{
    const Source src(text, source.string());
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source.string() + ": " + e.what());
    }
    if (!doc.is_object()) {
        src.fail(1, "top level must be an object");
    }
    doc = apply_override(std::move(doc), engine_override);

    ExperimentConfig cfg;
    cfg.source = source;
    Section root(src, doc, "", 1);
    root.number("seed", cfg.seed);
    if (root.has("engine")) {
        cfg.engine = read_engine(root.child("engine"));
    } else {
        root.take("engine");
    }
    read_domain(root.child("domain"), cfg.domain);
    read_loop(root.child("loop"), cfg.loop);
    read_template(root.child("template"), cfg.prompt_template);
    read_sampling(root.child("sampling"), cfg.sampling);
    read_output(root.child("output"), cfg.output);
    read_variation(root.child("variation"), cfg.variation);
    read_eda(root.child("eda_compare"), cfg.eda_compare);
    read_order_bias(root.child("order_bias"), cfg.order_bias);
    root.finish();

    cfg.eda_compare.codec = cfg.domain.codec;
    cfg.order_bias.codec = cfg.domain.codec;
    cfg.order_bias.params = cfg.sampling;
    cfg.loop.map.parents_per_call = cfg.loop.run.parents_per_crossover;
    const bool duplicates_set = doc.contains("loop") && doc["loop"].is_object() && doc["loop"].contains("duplicates");
    if (cfg.domain.kind == "symreg" && !duplicates_set) {
        cfg.loop.run.duplicates = core::DuplicatePolicy::discard;
    }

    try {
        cfg.loop.run.validate();
    } catch (const ConfigError& e) {
        const std::string msg = e.what();
        std::string field = msg.substr(0, msg.find_first_of(" ("));
        if (const auto dot = field.rfind('.'); dot != std::string::npos) {
            field = field.substr(dot + 1);
        }
        const std::size_t loop_line = src.line_of("loop", 1);
        const std::size_t line = src.line_of(field, loop_line);
        src.fail(line == 0 ? loop_line : line, "loop." + msg);
    }
    if (cfg.loop.kind == "map-elites" && cfg.loop.map.dims.empty()) {
        src.fail(src.line_of("loop", 1), "loop.dims: map-elites needs at least one dimension");
    }
    return cfg;
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& source)
{
    return parse_config(text, source, {});
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    if (!std::filesystem::exists(path)) {
        throw ConfigError(path.string() + ": config file not found");
    }
    return parse_config(core::read_file(path), path);
}

std::unique_ptr<backend::CompletionEngine> make_engine(const EngineSpec& spec, const ExperimentConfig& config)
{
    if (spec.kind == "umda-mock") {
        return std::make_unique<backend::UmdaMockEngine>(config.domain.codec, spec.children_per_call,
                                                         spec.fallback_parents);
    }
    if (spec.kind == "subtree-mock") {
        return backend::make_subtree_mock(core::RngStream(config.seed, "subtree-mock"));
    }
    if (spec.kind == "replay") {
        return backend::make_replay_engine(backend::load_recording(config.resolve(spec.recording)),
                                           spec.replay_match);
    }
    backend::HttpEngineConfig http;
    http.endpoint = spec.endpoint;
    http.model = spec.model;
    http.max_retries = spec.max_retries;
    http.timeout = std::chrono::seconds(spec.timeout_s);
    http.supports_logprobs = spec.supports_logprobs;
    if (spec.auth_env) {
        const char* key = std::getenv(spec.auth_env->c_str());
        if (!key || !*key) {
            throw ConfigError("engine.auth_env: environment variable " + *spec.auth_env + " is not set");
        }
        http.authorization = std::string("Bearer ") + key;
    }
    return std::make_unique<backend::HttpEngine>(std::move(http));
}

} // namespace lmx::cli
