#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>
#include <json.hpp>

#include "lmx/backend/umda_mock.hpp"
#include "lmx/binary/bitstring.hpp"
#include "lmx/binary/domain.hpp"
#include "lmx/core/error.hpp"
#include "lmx/core/run_log.hpp"
#include "lmx/evolve/ga.hpp"
#include "lmx/evolve/map_elites.hpp"
#include "lmx/evolve/selection.hpp"
#include "lmx/evolve/variation.hpp"

using namespace lmx;
using namespace lmx::evolve;
using core::Individual;
using core::Provenance;

namespace {

std::vector<Individual> evaluated(std::vector<std::pair<std::string, double>> items)
{
    std::vector<Individual> out;
    for (auto& [g, f] : items) {
        out.emplace_back(g, Provenance::seed);
        out.back().set_fitness(f);
    }
    return out;
}

Individual with_descriptor(std::string g, double fitness, std::vector<double> d)
{
    Individual ind(std::move(g), Provenance::seed);
    ind.set_fitness(fitness);
    ind.set_descriptor(std::move(d));
    return ind;
}

// Bitstring domain whose initial population is a fixed list.
class FixedStartDomain final : public core::Domain {
public:
    FixedStartDomain(std::vector<std::string> start, std::optional<std::string> prior = std::nullopt)
        : start_(std::move(start)), prior_(std::move(prior))
    {
    }
    std::vector<std::string> initial_genotypes(core::RngStream&) const override { return start_; }
    std::optional<std::string> canonicalize(std::string_view t) const override
    {
        if (!binary::is_bitstring(t)) {
            return std::nullopt;
        }
        return std::string(t);
    }
    std::optional<double> fitness(std::string_view g) const override
    {
        return static_cast<double>(binary::onemax(g));
    }
    std::optional<std::vector<double>> descriptor(std::string_view g) const override
    {
        return std::vector<double>{static_cast<double>(binary::leading_ones(g))};
    }
    std::optional<std::string> sample_prior(core::RngStream&) const override { return prior_; }

private:
    std::vector<std::string> start_;
    std::optional<std::string> prior_;
};

std::vector<nlohmann::json> parse_log(const std::string& text)
{
    std::vector<nlohmann::json> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        out.push_back(nlohmann::json::parse(line));
    }
    return out;
}

core::RunConfig onemax_config(std::uint64_t seed)
{
    core::RunConfig c;
    c.population_size = 10;
    c.generations = 10;
    c.seed = seed;
    c.selection = core::TruncationSelection{0.5};
    return c;
}

} // namespace

TEST_CASE("tournament of size 1 is a uniform pick")
{
    auto pop = evaluated({{"a", 1}, {"b", 9}, {"c", 3}});
    std::vector<std::size_t> draws{2, 0, 1};
    std::size_t i = 0;
    IndexDraw d = [&](std::size_t) { return draws[i++]; };
    CHECK(tournament_select(pop, 1, d) == 2);
    CHECK(tournament_select(pop, 1, d) == 0);
    CHECK(tournament_select(pop, 1, d) == 1);
}

TEST_CASE("exhaustive tournament returns the global argmax")
{
    auto pop = evaluated({{"a", 1}, {"b", 9}, {"c", 3}, {"d", -2}});
    std::size_t next = 0;
    IndexDraw d = [&](std::size_t n) { return next++ % n; };
    CHECK(tournament_select(pop, pop.size(), d) == 1);
}

TEST_CASE("tournament ties go to the earliest draw")
{
    auto pop = evaluated({{"a", 5}, {"b", 5}});
    std::vector<std::size_t> draws{1, 0};
    std::size_t i = 0;
    IndexDraw d = [&](std::size_t) { return draws[i++]; };
    CHECK(tournament_select(pop, 2, d) == 1);
}

TEST_CASE("tournament preconditions")
{
    core::RngStream rng(0, "t");
    std::vector<Individual> empty;
    CHECK_THROWS_AS(tournament_select(empty, 1, rng), PreconditionError);
    auto pop = evaluated({{"a", 1}});
    CHECK_THROWS_AS(tournament_select(pop, 0, rng), PreconditionError);
    std::vector<Individual> raw{Individual("x", Provenance::seed)};
    CHECK_THROWS_AS(tournament_select(raw, 1, rng), PreconditionError);
}

TEST_CASE("tournament over equal fitness is uniform (chi-squared)")
{
    const std::size_t n = 10;
    std::vector<std::pair<std::string, double>> items;
    for (std::size_t i = 0; i < n; ++i) {
        items.push_back({"g" + std::to_string(i), 1.0});
    }
    auto pop = evaluated(items);
    core::RngStream rng(2024, "tournament");
    std::vector<double> counts(n, 0.0);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const auto w = tournament_select(pop, 3, rng);
        REQUIRE(w < n);
        counts[w] += 1;
    }
    const double expected = draws / static_cast<double>(n);
    double stat = 0.0;
    for (double c : counts) {
        stat += (c - expected) * (c - expected) / expected;
    }
    boost::math::chi_squared dist(static_cast<double>(n - 1));
    const double p = boost::math::cdf(boost::math::complement(dist, stat));
    CHECK(p > 0.01);
}

TEST_CASE("truncation step keeps the top half plus the elite")
{
    std::vector<std::pair<std::string, double>> items;
    for (int i = 0; i < 10; ++i) {
        items.push_back({"g" + std::to_string(i), static_cast<double>(i)});
    }
    auto pop = evaluated(items);
    Individual elite("old", Provenance::seed);
    elite.set_fitness(100);
    auto pool = truncation_step(pop, &elite, 0.5);
    REQUIRE(pool.size() == 6);
    std::set<std::string> names;
    for (const auto& p : pool) {
        names.insert(p.genotype());
    }
    CHECK(names == std::set<std::string>{"g9", "g8", "g7", "g6", "g5", "old"});

    auto dup = truncation_step(pop, &pop[9], 0.5);
    CHECK(dup.size() == 5);

    auto all = truncation_step(pop, &elite, 1.0);
    CHECK(all.size() == 11);

    auto ceil_pool = truncation_step(pop, nullptr, 0.35);
    CHECK(ceil_pool.size() == 4);
}

TEST_CASE("truncation step breaks ties by position")
{
    auto pop = evaluated({{"a", 1}, {"b", 2}, {"c", 2}, {"d", 2}});
    auto pool = truncation_step(pop, nullptr, 0.5);
    REQUIRE(pool.size() == 2);
    CHECK(pool[0].genotype() == "b");
    CHECK(pool[1].genotype() == "c");
}

TEST_CASE("culls")
{
    auto pool = evaluated({{"a", 1}, {"b", 4}, {"c", 3}, {"d", 4}});
    auto kept = truncation_cull(pool, 2);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].genotype() == "b");
    CHECK(kept[1].genotype() == "d");

    core::RngStream rng(1, "cull");
    auto t = tournament_cull(pool, 3, 2, rng);
    CHECK(t.size() == 3);
    std::set<std::string> names;
    for (const auto& m : t) {
        names.insert(m.genotype());
    }
    CHECK(names.size() == 3);
    CHECK(tournament_cull(pool, 10, 2, rng).size() == 4);
}

TEST_CASE("sampling without replacement")
{
    core::RngStream rng(0, "s");
    for (int rep = 0; rep < 50; ++rep) {
        auto idx = sample_without_replacement(7, 4, rng);
        CHECK(idx.size() == 4);
        CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == 4);
        for (auto i : idx) {
            CHECK(i < 7);
        }
    }
    CHECK(sample_without_replacement(3, 10, rng).size() == 3);
}

TEST_CASE("ga with zero generations records only the initial population")
{
    binary::BinaryDomain domain({10, binary::Codec::plain}, binary::FitnessKind::onemax, 10);
    binary::OnePointVariation variation(0.1);
    core::RunLog log;
    auto cfg = onemax_config(3);
    cfg.generations = 0;
    auto result = ga_run(cfg, domain, variation, log);
    REQUIRE(result.history.records.size() == 1);
    CHECK(result.history.records[0].generation == 0);
    CHECK(result.history.records[0].evaluations == 10);
    CHECK(result.population.members.size() == 10);
}

TEST_CASE("all-optimal population is absorbing under the umda mock")
{
    FixedStartDomain domain(std::vector<std::string>(6, "1111"));
    auto engine = backend::make_umda_mock({"1111"});
    LmxVariation variation(*engine, domain, binary::binary_template(binary::Codec::plain), {}, 3, 3);
    core::RunLog log;
    core::RunConfig cfg;
    cfg.population_size = 6;
    cfg.generations = 5;
    auto result = ga_run(cfg, domain, variation, log);
    for (const auto& m : result.population.members) {
        CHECK(m.genotype() == "1111");
    }
    for (const auto& r : result.history.records) {
        CHECK(r.best_fitness == 4.0);
        CHECK(r.mean_fitness == 4.0);
    }
}

TEST_CASE("best fitness never decreases under truncation with elitism")
{
    binary::BinaryDomain domain({10, binary::Codec::plain}, binary::FitnessKind::onemax, 10);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        binary::OnePointVariation variation(0.1);
        core::RunLog log;
        auto result = ga_run(onemax_config(seed), domain, variation, log);
        REQUIRE(result.history.records.size() == 11);
        for (std::size_t g = 1; g < result.history.records.size(); ++g) {
            CHECK(result.history.records[g].best_fitness >= result.history.records[g - 1].best_fitness);
        }
        CHECK(result.elite.fitness() == result.history.records.back().best_fitness);
    }
}

TEST_CASE("per-generation evaluations stay within n plus the multi-child slack")
{
    binary::BinaryDomain domain({8, binary::Codec::plain}, binary::FitnessKind::onemax, 10);
    auto engine = backend::make_umda_mock({"00000000"}, binary::Codec::plain, 3);
    LmxVariation variation(*engine, domain, binary::binary_template(binary::Codec::plain), {}, 4, 3);
    core::RunLog log;
    auto cfg = onemax_config(9);
    cfg.parents_per_crossover = 4;
    auto result = ga_run(cfg, domain, variation, log);
    for (std::size_t g = 1; g < result.history.records.size(); ++g) {
        CHECK(result.history.records[g].evaluations <= cfg.population_size + cfg.offspring_cap - 1);
        CHECK(result.history.records[g].evaluations >= cfg.population_size);
    }
}

TEST_CASE("duplicate discard never evaluates a copy of a current member")
{
    binary::BinaryDomain domain({6, binary::Codec::plain}, binary::FitnessKind::onemax, 8);
    binary::OnePointVariation variation(0.05);
    std::ostringstream sink;
    core::RunLog log(sink);
    core::RunConfig cfg;
    cfg.population_size = 8;
    cfg.generations = 6;
    cfg.seed = 4;
    cfg.selection = core::TournamentSelection{3};
    cfg.duplicates = core::DuplicatePolicy::discard;
    (void)ga_run(cfg, domain, variation, log);

    std::map<std::size_t, std::set<std::string>> members;  // population after generation g
    std::map<std::size_t, std::vector<std::string>> fresh;
    for (const auto& r : parse_log(sink.str())) {
        const std::size_t g = r["generation"];
        if (r["event"] == "selection") {
            members[g].insert(r["genotype"].get<std::string>());
        } else if (r["event"] == "evaluation") {
            if (g == 0) {
                members[0].insert(r["genotype"].get<std::string>());
            } else {
                fresh[g].push_back(r["genotype"]);
            }
        }
    }
    for (const auto& [g, children] : fresh) {
        std::set<std::string> unique(children.begin(), children.end());
        CHECK(unique.size() == children.size());
        for (const auto& c : children) {
            CHECK(members[g - 1].count(c) == 0);
        }
    }
}

TEST_CASE("prior injection with probability 1 replaces every variation call")
{
    FixedStartDomain domain({"000", "001", "010"}, std::string("111"));
    binary::OnePointVariation variation(0.0);
    std::ostringstream sink;
    core::RunLog log(sink);
    core::RunConfig cfg;
    cfg.population_size = 3;
    cfg.generations = 2;
    cfg.prior_injection_probability = 1.0;
    auto result = ga_run(cfg, domain, variation, log);
    std::size_t prior = 0;
    for (const auto& r : parse_log(sink.str())) {
        if (r["event"] == "evaluation" && r["generation"] != 0) {
            CHECK(r["provenance"] == "prior-injection");
            CHECK(r["genotype"] == "111");
            ++prior;
        }
    }
    CHECK(prior == 6);
    CHECK(result.elite.genotype() == "111");
}

TEST_CASE("ga initialization failure")
{
    FixedStartDomain domain({"abc", "2"});
    binary::OnePointVariation variation;
    core::RunLog log;
    CHECK_THROWS_AS(ga_run(core::RunConfig{}, domain, variation, log), InitializationError);
}

TEST_CASE("identical configurations give byte-identical logs")
{
    binary::BinaryDomain domain({10, binary::Codec::plain}, binary::FitnessKind::onemax, 10);
    auto run = [&] {
        auto engine = backend::make_umda_mock({"0000000000"});
        LmxVariation variation(*engine, domain, binary::binary_template(binary::Codec::plain), {}, 3, 3);
        std::ostringstream sink;
        core::RunLog log(sink);
        auto result = ga_run(onemax_config(17), domain, variation, log);
        return sink.str() + result.history.to_csv();
    };
    const auto a = run();
    CHECK(a == run());
    CHECK(a.find("lmx-call") != std::string::npos);
}

TEST_CASE("history csv layout")
{
    GaHistory h;
    h.records.push_back({0, 3.0, 2.5, 1.0, 10, 10, "111"});
    CHECK(h.to_csv() == "generation,best_fitness,mean_fitness,validity_rate,novelty_count,evaluations\n"
                        "0,3,2.5,1,10,10\n");
}

TEST_CASE("thirty-bin map over [0, 1.5]")
{
    EliteMap map({{0.0, 1.5, 30}});
    CHECK(map.cell_of({0.0}) == Cell{0});
    CHECK(map.cell_of({0.075}) == Cell{1});
    CHECK(map.cell_of({1.5}) == Cell{29});
    CHECK(map.cell_of({7.0}) == Cell{29});
    CHECK(map.cell_of({-1.0}) == Cell{0});
}

TEST_CASE("map insertion rules")
{
    EliteMap map({{0.0, 1.0, 4}, {0.0, 1.0, 2}});
    CHECK(map.insert(with_descriptor("a", 1.0, {0.1, 0.9})));
    CHECK_FALSE(map.insert(with_descriptor("b", 1.0, {0.2, 0.8})));
    CHECK(map.cells().at(Cell{0, 1}).genotype() == "a");
    CHECK(map.insert(with_descriptor("c", 1.5, {0.2, 0.8})));
    CHECK(map.cells().at(Cell{0, 1}).genotype() == "c");
    CHECK_FALSE(map.insert(with_descriptor("d", 0.5, {0.0, 0.99})));
    CHECK(map.insert(with_descriptor("e", 0.1, {5.0, -3.0})));
    CHECK(map.cells().count(Cell{3, 0}) == 1);
    CHECK_THROWS_AS(map.insert(with_descriptor("f", 1.0, {0.5})), PreconditionError);
    Individual bare("g", Provenance::seed);
    bare.set_fitness(1.0);
    CHECK_THROWS_AS(map.insert(bare), PreconditionError);
    CHECK_THROWS_AS(EliteMap({}), PreconditionError);
    CHECK_THROWS_AS(EliteMap({{1.0, 1.0, 3}}), PreconditionError);
    CHECK_THROWS_AS(EliteMap({{0.0, 1.0, 0}}), PreconditionError);
}

TEST_CASE("qd score")
{
    EliteMap map({{0.0, 1.0, 2}});
    CHECK(map.qd_score() == 0.0);
    CHECK_FALSE(map.best());
    map.insert(with_descriptor("a", 0.5, {0.1}));
    map.insert(with_descriptor("b", 0.25, {0.9}));
    CHECK(map.qd_score() == 0.75);
    CHECK(map.best()->genotype() == "a");

    EliteMap offset({{0.0, 1.0, 2}}, -1.0);
    offset.insert(with_descriptor("a", 0.5, {0.1}));
    CHECK(offset.qd_score() == 1.5);
}

TEST_CASE("improving stream in a single cell")
{
    EliteMap map({{0.0, 1.5, 30}});
    double last = map.qd_score();
    for (int i = 1; i <= 20; ++i) {
        CHECK(map.insert(with_descriptor("g" + std::to_string(i), i * 0.1, {0.7})));
        CHECK(map.niches_filled() == 1);
        CHECK(map.qd_score() > last);
        last = map.qd_score();
    }
}

TEST_CASE("near parent sampling stays close to the anchor when it can")
{
    EliteMap map({{0.0, 30.0, 30}});
    for (int c : {0, 1, 2, 20, 21, 29}) {
        map.insert(with_descriptor("g" + std::to_string(c), 1.0, {c + 0.5}));
    }
    core::RngStream rng(5, "p");
    for (int rep = 0; rep < 100; ++rep) {
        auto cells = sample_parent_cells(map, 3, ParentStrategy::near, 2, rng);
        REQUIRE(cells.size() == 3);
        const auto anchor = cells[0][0];
        std::set<std::size_t> distinct;
        for (const auto& c : cells) {
            distinct.insert(c[0]);
        }
        CHECK(distinct.size() == 3);
        std::size_t near = 0;
        for (const auto& c : cells) {
            near += (c[0] > anchor ? c[0] - anchor : anchor - c[0]) <= 2;
        }
        const std::size_t available = anchor <= 2 ? 3 : (anchor <= 21 ? 2 : 1);
        CHECK(near == std::min<std::size_t>(3, available));
    }
    auto uni = sample_parent_cells(map, 10, ParentStrategy::uniform, 0, rng);
    CHECK(uni.size() == 6);
    EliteMap empty({{0.0, 1.0, 3}});
    CHECK_THROWS_AS(sample_parent_cells(empty, 1, ParentStrategy::uniform, 0, rng), PreconditionError);
}

TEST_CASE("map-elites with budget 0 returns the seeded map")
{
    binary::BinaryDomain domain({12, binary::Codec::plain}, binary::FitnessKind::leading_ones, 20);
    binary::OnePointVariation variation;
    MapElitesConfig cfg;
    cfg.dims = {{0.0, 1.0, 10}};
    cfg.evaluation_budget = 0;
    cfg.seed = 8;
    core::RunLog log;
    auto result = map_elites_run(cfg, domain, variation, log);

    EliteMap seeded(cfg.dims);
    core::RngStream init(cfg.seed, "init");
    for (const auto& g : domain.initial_genotypes(init)) {
        Individual ind(g, Provenance::seed);
        ind.set_fitness(*domain.fitness(g));
        ind.set_descriptor(*domain.descriptor(g));
        seeded.insert(ind);
    }
    CHECK(result.map.to_csv() == seeded.to_csv());
    REQUIRE(result.history.size() == 1);
    CHECK(result.history[0].evaluations == 0);
}

TEST_CASE("map-elites qd score and niches are monotone over a run")
{
    binary::BinaryDomain domain({12, binary::Codec::plain}, binary::FitnessKind::onemax, 10);
    binary::OnePointVariation variation(0.1);
    MapElitesConfig cfg;
    cfg.dims = {{0.0, 1.0, 12}};
    cfg.evaluation_budget = 600;
    cfg.checkpoint_every = 50;
    cfg.seed = 2;
    for (auto strategy : {ParentStrategy::uniform, ParentStrategy::near}) {
        cfg.strategy = strategy;
        core::RunLog log;
        auto result = map_elites_run(cfg, domain, variation, log);
        REQUIRE(result.history.size() >= 2);
        CHECK(result.history.back().evaluations == 600);
        for (std::size_t i = 1; i < result.history.size(); ++i) {
            CHECK(result.history[i].qd_score >= result.history[i - 1].qd_score);
            CHECK(result.history[i].niches_filled >= result.history[i - 1].niches_filled);
            CHECK(result.history[i].evaluations > result.history[i - 1].evaluations);
        }
        for (const auto& [cell, ind] : result.map.cells()) {
            CHECK(result.map.cell_of(*ind.descriptor()) == cell);
        }
    }
}
