#include <benchmark/benchmark.h>

#include <omp.h>

#include "lmx/core/evaluate.hpp"
#include "lmx/core/rng.hpp"
#include "lmx/symreg/crossover.hpp"
#include "lmx/symreg/domain.hpp"
#include "lmx/symreg/kernels.hpp"
#include "lmx/symreg/parser.hpp"

using namespace lmx;
using namespace lmx::symreg;

namespace {

// Same shape as the banana problem: 5300 rows, two features.
constexpr std::size_t kRows = 5300;

RegressionDataset make_data(std::size_t rows)
{
    RegressionDataset d;
    core::RngStream rng(1, "bench/data");
    d.X.rows = rows;
    d.X.cols = 2;
    for (std::size_t i = 0; i < rows; ++i) {
        const double a = rng.uniform(-3, 3), b = rng.uniform(-3, 3);
        d.X.data.push_back(a);
        d.X.data.push_back(b);
        d.y.push_back(std::exp(-a * a / 4) * std::cos(a + 0.5 * b));
    }
    assign_split(d, 1.0, 0);
    return d;
}

const Expr& expression()
{
    static const Expr e = *parse_expression("1.2*exp(-0.3*x1**2 - 0.1*x2**2)*cos(x1 + 0.5*x2 + 0.1) + 0.01*x1*x2");
    return e;
}

void set_threads(const benchmark::State& state)
{
    omp_set_num_threads(static_cast<int>(state.range(1)));
}

void BM_evaluate_serial(benchmark::State& state)
{
    const auto d = make_data(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::evaluate_serial(expression(), d.X));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_evaluate_parallel(benchmark::State& state)
{
    const auto d = make_data(static_cast<std::size_t>(state.range(0)));
    set_threads(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::evaluate_parallel(expression(), d.X));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_r2_serial(benchmark::State& state)
{
    const auto d = make_data(static_cast<std::size_t>(state.range(0)));
    const auto y_hat = *kernels::evaluate_serial(expression(), d.X);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::r2_serial(d.y, y_hat));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_r2_parallel(benchmark::State& state)
{
    const auto d = make_data(static_cast<std::size_t>(state.range(0)));
    const auto y_hat = *kernels::evaluate_serial(expression(), d.X);
    set_threads(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(kernels::r2_parallel(d.y, y_hat));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

core::Population random_population(std::size_t n)
{
    core::RngStream rng(2, "bench/pop");
    core::Population pop;
    for (std::size_t i = 0; i < n; ++i) {
        pop.members.emplace_back(to_string(random_expression(5, 2, rng)), core::Provenance::seed);
    }
    return pop;
}

// One generation's worth of fitness calls, one after another.
void BM_population_serial(benchmark::State& state)
{
    const SymRegDomain domain(make_data(kRows), {expression()}, {});
    const auto pop = random_population(50);
    for (auto _ : state) {
        std::size_t valid = 0;
        for (const auto& m : pop.members) {
            valid += domain.fitness(m.genotype()).has_value();
        }
        benchmark::DoNotOptimize(valid);
    }
}

void BM_population_parallel(benchmark::State& state)
{
    const SymRegDomain domain(make_data(kRows), {expression()}, {});
    const auto pop = random_population(50);
    set_threads(state);
    const core::FitnessFn fitness = [&](std::string_view g) { return domain.fitness(g); };
    for (auto _ : state) {
        benchmark::DoNotOptimize(core::evaluate_population(pop, fitness));
    }
}

void thread_args(benchmark::internal::Benchmark* b)
{
    const int max_threads = omp_get_max_threads();
    for (std::int64_t rows : {static_cast<std::int64_t>(kRows), std::int64_t{100000}}) {
        for (int t = 1; t <= max_threads; t *= 2) {
            b->Args({rows, t});
        }
    }
}

} // namespace

BENCHMARK(BM_evaluate_serial)->Arg(kRows)->Arg(100000);
BENCHMARK(BM_evaluate_parallel)->Apply(thread_args);
BENCHMARK(BM_r2_serial)->Arg(kRows)->Arg(100000);
BENCHMARK(BM_r2_parallel)->Apply(thread_args);
BENCHMARK(BM_population_serial);
BENCHMARK(BM_population_parallel)->Apply([](benchmark::internal::Benchmark* b) {
    for (int t = 1; t <= omp_get_max_threads(); t *= 2) {
        b->Args({static_cast<std::int64_t>(kRows), t});
    }
});

BENCHMARK_MAIN();
