#include "lmx/cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "lmx/analysis/eda.hpp"
#include "lmx/analysis/ordering.hpp"
#include "lmx/backend/replay.hpp"
#include "lmx/binary/domain.hpp"
#include "lmx/binary/metrics.hpp"
#include "lmx/cli/config.hpp"
#include "lmx/cli/plot.hpp"
#include "lmx/core/error.hpp"
#include "lmx/core/io.hpp"
#include "lmx/evolve/ga.hpp"
#include "lmx/evolve/map_elites.hpp"
#include "lmx/evolve/variation.hpp"
#include "lmx/symreg/benchmarks.hpp"
#include "lmx/symreg/domain.hpp"
#include "lmx/symreg/expr.hpp"
#include "lmx/symreg/pareto.hpp"
#include "lmx/symreg/parser.hpp"

namespace lmx::cli {

namespace {

ExperimentConfig load(const CommandOptions& opts)
{
    if (!std::filesystem::exists(opts.config)) {
        throw ConfigError(opts.config.string() + ": config file not found");
    }
    auto cfg = parse_config(core::read_file(opts.config), opts.config, opts.engine_override.value_or(""));
    if (opts.seed) {
        cfg.seed = *opts.seed;
    }
    if (opts.out_dir) {
        cfg.output.directory = *opts.out_dir;
    } else {
        cfg.output.directory = cfg.resolve(cfg.output.directory);
    }
    if (opts.no_plot) {
        cfg.output.plot = false;
    }
    std::filesystem::create_directories(cfg.output.directory);
    return cfg;
}

void write_plot(const ExperimentConfig& cfg, const std::string& name, const std::function<std::string()>& render,
                std::ostream& err)
{
    if (!cfg.output.plot) {
        return;
    }
    try {
        core::write_file_atomic(cfg.output.directory / name, render());
    } catch (const std::exception& e) {
        err << "warning: could not write " << name << ": " << e.what() << '\n';
    }
}

/// Engine for a command, optionally wrapped so its exchanges can be saved.
struct EngineHandle {
    std::unique_ptr<backend::CompletionEngine> inner;
    std::unique_ptr<backend::RecordingEngine> recorder;

    backend::CompletionEngine& get() { return recorder ? *recorder : *inner; }

    void save(const ExperimentConfig& cfg) const
    {
        if (recorder) {
            recorder->save_jsonl(cfg.output.directory / "recording.jsonl");
        }
    }
};

EngineHandle open_engine(const EngineSpec& spec, const ExperimentConfig& cfg)
{
    EngineHandle h;
    h.inner = make_engine(spec, cfg);
    if (cfg.output.record) {
        h.recorder = std::make_unique<backend::RecordingEngine>(*h.inner);
    }
    return h;
}

std::unique_ptr<core::Domain> make_domain(const ExperimentConfig& cfg)
{
    const auto& d = cfg.domain;
    if (d.kind == "binary") {
        const std::size_t initial = d.initial_size ? d.initial_size : cfg.loop.run.population_size;
        return std::make_unique<binary::BinaryDomain>(binary::BitstringSpec{d.length, d.codec}, d.fitness, initial);
    }
    auto data = symreg::load_dataset_csv(cfg.resolve(d.dataset), d.train_fraction, d.split_seed);
    auto benchmarks = symreg::load_benchmarks(cfg.resolve(d.benchmarks));
    symreg::SymRegOptions options;
    options.var_count = d.var_count;
    if (d.initial_size) {
        options.initial_size = d.initial_size;
    }
    return std::make_unique<symreg::SymRegDomain>(std::move(data), std::move(benchmarks), options);
}

op::PromptTemplate make_template(const ExperimentConfig& cfg)
{
    op::PromptTemplate t =
        cfg.domain.kind == "symreg" ? symreg::symreg_template() : binary::binary_template(cfg.domain.codec);
    cfg.prompt_template.apply(t);
    return t;
}

std::string pareto_of(const evolve::GaResult& result, const symreg::SymRegDomain& domain)
{
    std::vector<symreg::ParetoPoint> points;
    auto add = [&](const core::Individual& ind) {
        if (!ind.evaluated()) {
            return;
        }
        auto e = symreg::parse_expression(ind.genotype());
        if (!e) {
            return;
        }
        symreg::ParetoPoint p;
        p.r2_train = ind.fitness();
        p.r2_test = domain.test_r2(ind.genotype()).value_or(std::numeric_limits<double>::quiet_NaN());
        p.size = symreg::expression_size(*e);
        p.expression = ind.genotype();
        points.push_back(std::move(p));
    };
    for (const auto& m : result.population.members) {
        add(m);
    }
    add(result.elite);
    return symreg::pareto_csv(symreg::pareto_front(points));
}

template <typename Fn>
int guarded(const CommandOptions& opts, std::ostream& err, Fn&& body)
{
    try {
        return body();
    } catch (const backend::CapabilityError& e) {
        err << "error: missing engine capability: " << e.what() << '\n';
        return kCapabilityError;
    } catch (const backend::EngineError& e) {
        err << "error: engine failure: " << e.what() << '\n';
        return kEngineError;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const symreg::DatasetNotFound& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const evolve::InitializationError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const PreconditionError& e) {
        err << "error: " << opts.config.string() << ": " << e.what() << '\n';
        return kInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

std::vector<std::string> read_parents(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string() + ": parents file not found");
    }
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = op::trim(line);
        if (!t.empty()) {
            out.emplace_back(t);
        }
    }
    if (out.empty()) {
        throw ConfigError(path.string() + ": parents file is empty");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!binary::is_bitstring(out[i]) || out[i].size() != out.front().size()) {
            throw ConfigError(path.string() + ":" + std::to_string(i + 1) +
                              ": parents must be bitstrings of equal length");
        }
    }
    return out;
}

} // namespace

int cmd_run(const CommandOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(opts, err, [&] {
        const auto cfg = load(opts);
        const auto domain = make_domain(cfg);

        EngineHandle engine;
        std::unique_ptr<evolve::VariationOperator> variation;
        if (cfg.loop.variation == "lmx") {
            engine = open_engine(cfg.engine, cfg);
            variation = std::make_unique<evolve::LmxVariation>(engine.get(), *domain, make_template(cfg),
                                                               cfg.sampling, cfg.loop.run.parents_per_crossover,
                                                               cfg.loop.run.offspring_cap);
        } else if (cfg.domain.kind == "symreg") {
            variation = std::make_unique<symreg::SubtreeVariation>();
        } else {
            variation = std::make_unique<binary::OnePointVariation>(cfg.domain.flip_probability);
        }

        const auto dir = cfg.output.directory;
        core::AtomicOutputFile log_file(dir / "run.jsonl");
        core::RunLog log(log_file.stream());

        if (cfg.loop.kind == "map-elites") {
            auto me = cfg.loop.map;
            me.seed = cfg.seed;
            const auto result = evolve::map_elites_run(me, *domain, *variation, log);
            log_file.commit();
            core::write_file_atomic(dir / "history.csv", result.history_csv());
            core::write_file_atomic(dir / "map.csv", result.map.to_csv());
            engine.save(cfg);
            write_plot(cfg, "history.svg", [&] {
                Series qd{"qd_score", {}, {}, {}};
                for (const auto& r : result.history) {
                    qd.x.push_back(static_cast<double>(r.evaluations));
                    qd.y.push_back(r.qd_score);
                }
                return line_plot_svg("MAP-Elites QD score", "evaluations", "QD score", {qd});
            }, err);
            out << "niches " << result.map.niches_filled() << " qd_score " << core::format_double(result.map.qd_score())
                << '\n';
            if (auto best = result.map.best()) {
                out << "best " << best->genotype() << " fitness " << core::format_double(best->fitness()) << '\n';
            }
            return int{kOk};
        }

        auto run = cfg.loop.run;
        run.seed = cfg.seed;
        const auto result = evolve::ga_run(run, *domain, *variation, log);
        log_file.commit();
        core::write_file_atomic(dir / "history.csv", result.history.to_csv());
        if (const auto* sr = dynamic_cast<const symreg::SymRegDomain*>(domain.get())) {
            core::write_file_atomic(dir / "pareto.csv", pareto_of(result, *sr));
        }
        engine.save(cfg);
        write_plot(cfg, "history.svg", [&] {
            Series best{"best", {}, {}, {}};
            Series mean{"mean", {}, {}, {}};
            for (const auto& r : result.history.records) {
                best.x.push_back(static_cast<double>(r.generation));
                best.y.push_back(r.best_fitness);
                mean.x.push_back(static_cast<double>(r.generation));
                mean.y.push_back(r.mean_fitness);
            }
            return line_plot_svg("Convergence", "generation", "fitness", {best, mean});
        }, err);
        out << "best " << result.elite.genotype() << " fitness " << core::format_double(result.elite.fitness())
            << '\n';
        return int{kOk};
    });
}

int cmd_variation(const CommandOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(opts, err, [&] {
        const auto cfg = load(opts);
        std::filesystem::path parents_path = opts.parents_file ? *opts.parents_file
                                                               : cfg.resolve(cfg.variation.parents_file);
        if (parents_path.empty()) {
            throw ConfigError("variation: no parents file (use --parents or variation.parents_file)");
        }
        const auto parents = read_parents(parents_path);
        const auto& v = cfg.variation;

        std::vector<EngineSpec> engines = v.sweep_engines;
        const bool sweep = !engines.empty();
        if (!sweep) {
            engines.push_back(cfg.engine);
        }
        binary::VariationSetup setup;
        setup.codec = cfg.domain.codec;
        setup.params = cfg.sampling;

        std::ostringstream csv;
        csv << (sweep ? "engine," : "") << "parents,valid_pct,novel_count\n";
        std::vector<Series> series;
        const std::size_t hi = std::min(v.max_parents, parents.size());
        if (v.min_parents > hi) {
            throw ConfigError("variation: parents file has " + std::to_string(parents.size()) +
                              " lines, fewer than min_parents");
        }
        for (const auto& spec : engines) {
            auto engine = open_engine(spec, cfg);
            Series s{spec.display_name(), {}, {}, {}};
            for (std::size_t m = v.min_parents; m <= hi; ++m) {
                core::RngStream rng(cfg.seed, "variation/" + spec.display_name() + "/" + std::to_string(m));
                std::vector<std::string> subset;
                for (auto i : evolve::sample_without_replacement(parents.size(), m, rng)) {
                    subset.push_back(parents[i]);
                }
                const auto metrics =
                    binary::variation_metrics(subset, engine.get(), v.trials, v.children_per_trial, setup, rng);
                if (sweep) {
                    csv << core::csv_field(spec.display_name()) << ',';
                }
                csv << m << ',' << core::format_double(metrics.valid_pct) << ',' << metrics.novel_count << '\n';
                s.x.push_back(static_cast<double>(m));
                s.y.push_back(metrics.valid_pct);
            }
            engine.save(cfg);
            series.push_back(std::move(s));
        }
        core::write_file_atomic(cfg.output.directory / "variation.csv", csv.str());
        write_plot(cfg, "variation.svg",
                   [&] { return line_plot_svg("Valid offspring", "parents in prompt", "valid %", series); }, err);
        out << "wrote " << (cfg.output.directory / "variation.csv").string() << '\n';
        return int{kOk};
    });
}

int cmd_eda_compare(const CommandOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(opts, err, [&] {
        const auto cfg = load(opts);
        auto engine = open_engine(cfg.engine, cfg);
        auto tmpl = binary::binary_template(cfg.domain.codec);
        cfg.prompt_template.apply(tmpl);
        const core::RngStream rng(cfg.seed, "eda-compare");
        core::AtomicOutputFile log_file(cfg.output.directory / "run.jsonl");
        core::RunLog log(log_file.stream());
        auto options = cfg.eda_compare;
        options.log = &log;
        const auto rows = analysis::eda_compare_experiment(options, engine.get(), tmpl, rng);
        log_file.commit();
        core::write_file_atomic(cfg.output.directory / "eda_compare.csv", analysis::eda_compare_csv(rows));
        engine.save(cfg);
        write_plot(cfg, "eda_compare.svg", [&] {
            Series s{"|UMDA - LMX|", {}, {}, {}};
            for (const auto& r : rows) {
                s.x.push_back(static_cast<double>(r.parents));
                s.y.push_back(r.mean);
                s.error.push_back(r.stddev);
            }
            return line_plot_svg("Marginal difference", "parents", "mean absolute difference", {s});
        }, err);
        for (const auto& r : rows) {
            out << "parents " << r.parents << " mean_abs_diff " << core::format_double(r.mean) << " stddev "
                << core::format_double(r.stddev) << '\n';
        }
        return int{kOk};
    });
}

int cmd_order_bias(const CommandOptions& opts, std::ostream& out, std::ostream& err)
{
    return guarded(opts, err, [&] {
        const auto cfg = load(opts);
        auto engine = open_engine(cfg.engine, cfg);
        const core::RngStream rng(cfg.seed, "order-bias");
        const auto hist = analysis::ordering_bias_experiment(cfg.order_bias, engine.get(), rng);
        core::write_file_atomic(cfg.output.directory / "order_bias.csv", analysis::ordering_bias_csv(hist));
        engine.save(cfg);
        write_plot(cfg, "order_bias.svg", [&] {
            std::vector<std::string> ticks;
            for (std::size_t s = 0; s <= cfg.order_bias.length; ++s) {
                ticks.push_back(std::to_string(s));
            }
            std::vector<Series> groups;
            for (const auto& h : hist) {
                Series g{std::string(analysis::to_string(h.order)), {}, {}, {}};
                for (auto c : h.counts) {
                    g.y.push_back(static_cast<double>(c));
                }
                groups.push_back(std::move(g));
            }
            return bar_plot_svg(std::string("Offspring ") + std::string(analysis::to_string(cfg.order_bias.sort_key)),
                                "score", ticks, groups);
        }, err);
        for (const auto& h : hist) {
            out << analysis::to_string(h.order) << " children " << h.total() << " mean_score "
                << core::format_double(h.mean_score()) << '\n';
        }
        return int{kOk};
    });
}

} // namespace lmx::cli
