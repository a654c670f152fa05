#include <iostream>

#include <CLI11.hpp>

#include "lmx/cli/commands.hpp"

int main(int argc, char** argv)
{
    using namespace lmx::cli;

    CLI::App app{"Evolution with language model crossover"};
    app.require_subcommand(1);

    CommandOptions opts;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string engine_override;
    std::string parents;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "Experiment config (JSON)")->required();
        sub->add_option("--seed", seed, "Override the config seed");
        sub->add_option("--out-dir", out_dir, "Override output.directory");
        sub->add_flag("--no-plot", opts.no_plot, "Skip SVG plots");
        sub->add_option("--engine-override", engine_override,
                        "Engine kind, or a JSON object merged over the engine section");
    };

    auto* run = app.add_subcommand("run", "Run the configured GA or MAP-Elites loop");
    common(run);
    auto* variation = app.add_subcommand("variation", "Validity and novelty of offspring vs. parent count");
    common(variation);
    variation->add_option("--parents", parents, "File with one parent bitstring per line");
    auto* eda = app.add_subcommand("eda-compare", "Compare UMDA marginals with the engine's implied marginals");
    common(eda);
    auto* bias = app.add_subcommand("order-bias", "Offspring score histograms under sorted parent orders");
    common(bias);

    CLI11_PARSE(app, argc, argv);

    if (app.get_subcommands().front()->count("--seed") > 0) {
        opts.seed = seed;
    }
    if (!out_dir.empty()) {
        opts.out_dir = out_dir;
    }
    if (!engine_override.empty()) {
        opts.engine_override = engine_override;
    }
    if (!parents.empty()) {
        opts.parents_file = parents;
    }

    if (run->parsed()) {
        return cmd_run(opts, std::cout, std::cerr);
    }
    if (variation->parsed()) {
        return cmd_variation(opts, std::cout, std::cerr);
    }
    if (eda->parsed()) {
        return cmd_eda_compare(opts, std::cout, std::cerr);
    }
    return cmd_order_bias(opts, std::cout, std::cerr);
}
