#include "lmx/evolve/ga.hpp"

#include <sstream>
#include <unordered_set>

#include "lmx/core/evaluate.hpp"
#include "lmx/core/io.hpp"
#include "lmx/evolve/selection.hpp"

namespace lmx::evolve {

namespace {

GenerationRecord summarize(const core::Population& pop, std::size_t generation)
{
    GenerationRecord r;
    r.generation = generation;
    const auto best = best_index(pop.members);
    r.best_fitness = pop.members[best].fitness();
    r.best_genotype = pop.members[best].genotype();
    double sum = 0.0;
    for (const auto& m : pop.members) {
        sum += m.fitness();
    }
    r.mean_fitness = sum / static_cast<double>(pop.members.size());
    return r;
}

double ratio(std::size_t num, std::size_t den)
{
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

} // namespace

std::string GaHistory::to_csv() const
{
    std::ostringstream out;
    out << "generation,best_fitness,mean_fitness,validity_rate,novelty_count,evaluations\n";
    for (const auto& r : records) {
        out << r.generation << ',' << core::format_double(r.best_fitness) << ','
            << core::format_double(r.mean_fitness) << ',' << core::format_double(r.validity_rate) << ','
            << r.novelty_count << ',' << r.evaluations << '\n';
    }
    return out.str();
}

GaResult ga_run(const core::RunConfig& config, const core::Domain& domain, VariationOperator& variation,
                core::RunLog& log)
{
    config.validate();
    const std::size_t n = config.population_size;
    core::RngStream init_rng(config.seed, "init");
    core::RngStream vary_rng(config.seed, "vary");
    core::RngStream prior_rng(config.seed, "prior");
    core::RngStream cull_rng(config.seed, "cull");
    const core::FitnessFn fitness = [&domain](std::string_view g) { return domain.fitness(g); };

    // Initial population.
    core::Population pop;
    std::size_t initial_candidates = 0;
    for (auto& g : domain.initial_genotypes(init_rng)) {
        ++initial_candidates;
        if (auto c = domain.canonicalize(g)) {
            pop.members.emplace_back(std::move(*c), core::Provenance::seed);
        }
    }
    core::EvaluationStats init_stats;
    pop = core::evaluate_population(std::move(pop), fitness, &init_stats);
    if (pop.members.empty()) {
        throw InitializationError("initializer produced no valid individuals");
    }
    for (const auto& m : pop.members) {
        log.evaluation(0, m, init_rng.label());
    }

    GaHistory history;
    {
        auto r = summarize(pop, 0);
        r.validity_rate = ratio(pop.members.size(), initial_candidates);
        r.novelty_count = pop.members.size();
        r.evaluations = init_stats.evaluated;
        history.records.push_back(std::move(r));
    }
    core::Individual elite = pop.members[best_index(pop.members)];

    const std::size_t max_calls = 50 * n + 100;
    for (std::size_t gen = 1; gen <= config.generations; ++gen) {
        std::vector<core::Individual> pool;
        if (const auto* tr = std::get_if<core::TruncationSelection>(&config.selection)) {
            pool = truncation_step(pop.members, &elite, tr->keep_fraction);
        } else {
            pool = pop.members;
        }

        std::unordered_set<std::string> current;
        for (const auto& m : pop.members) {
            current.insert(m.genotype());
        }
        std::unordered_set<std::string> fresh_seen;

        VariationContext ctx;
        ctx.log = &log;
        ctx.generation = gen;
        core::Population fresh;
        fresh.generation = gen;
        std::size_t canonical_ok = 0;
        for (std::size_t calls = 0; fresh.members.size() < n && calls < max_calls; ++calls) {
            std::vector<Proposal> proposals;
            std::optional<std::string> prior;
            if (config.prior_injection_probability > 0.0 && prior_rng.bernoulli(config.prior_injection_probability)) {
                prior = domain.sample_prior(prior_rng);
            }
            if (prior) {
                ++ctx.proposed;
                proposals.push_back({std::move(*prior), core::Provenance::prior});
            } else {
                proposals = variation.vary(pool, vary_rng, ctx);
            }
            for (auto& p : proposals) {
                auto c = domain.canonicalize(p.genotype);
                if (!c) {
                    ++ctx.rejected;
                    continue;
                }
                ++canonical_ok;
                if (config.duplicates == core::DuplicatePolicy::discard &&
                    (current.contains(*c) || fresh_seen.contains(*c))) {
                    continue;
                }
                fresh_seen.insert(*c);
                fresh.members.emplace_back(std::move(*c), p.provenance);
            }
        }

        core::EvaluationStats stats;
        fresh = core::evaluate_population(std::move(fresh), fitness, &stats);
        std::unordered_set<std::string> novel;
        for (const auto& m : fresh.members) {
            log.evaluation(gen, m, vary_rng.label());
            if (!current.contains(m.genotype())) {
                novel.insert(m.genotype());
            }
        }

        std::vector<core::Individual> merged = std::move(pop.members);
        merged.insert(merged.end(), std::make_move_iterator(fresh.members.begin()),
                      std::make_move_iterator(fresh.members.end()));
        if (const auto* t = std::get_if<core::TournamentSelection>(&config.selection)) {
            pop.members = tournament_cull(std::move(merged), n, t->size, cull_rng);
        } else {
            pop.members = truncation_cull(std::move(merged), n);
        }
        pop.generation = gen;
        for (const auto& m : pop.members) {
            log.selection(gen, m, cull_rng.label());
        }

        const auto& best = pop.members[best_index(pop.members)];
        if (best.fitness() > elite.fitness()) {
            elite = best;
        }

        auto r = summarize(pop, gen);
        r.validity_rate = ratio(canonical_ok - std::min(canonical_ok, stats.invalid), ctx.proposed);
        r.novelty_count = novel.size();
        r.evaluations = stats.evaluated;
        history.records.push_back(std::move(r));
    }

    return GaResult{std::move(history), std::move(pop), std::move(elite)};
}

} // namespace lmx::evolve
