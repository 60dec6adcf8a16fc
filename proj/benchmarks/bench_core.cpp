#include "foilspace/activesubspace.hpp"
#include "foilspace/parsec.hpp"
#include "foilspace/qoi.hpp"
#include "foilspace/sampling.hpp"

#include <benchmark/benchmark.h>

using namespace foilspace;

static void BM_FitQuadratic(benchmark::State& state) {
    const int m = static_cast<int>(state.range(0));
    const int n = static_cast<int>(3 * activesubspace::coefficient_count(m));
    const auto X = sampling::sample_hypercube(m, n, 1);
    const Eigen::VectorXd f = (X.array().square().rowwise().sum()).matrix() + X.col(0);
    for (auto _ : state) benchmark::DoNotOptimize(activesubspace::fit_quadratic(X, f));
}
BENCHMARK(BM_FitQuadratic)->Arg(6)->Arg(10)->Arg(11);

static void BM_Bootstrap(benchmark::State& state) {
    const auto X = sampling::sample_hypercube(6, 800, 2);
    const auto g = qoi::ridge(Eigen::VectorXd::Ones(6), qoi::RidgeProfile::Quadratic, 0.1, 3);
    const auto batch = qoi::evaluate_batch(*g, X);
    activesubspace::BootstrapOptions opts;
    opts.n_boot = 50;
    opts.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(activesubspace::bootstrap(batch.X, batch.f, opts));
}
BENCHMARK(BM_Bootstrap)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_ParsecSolve(benchmark::State& state) {
    const auto c = sampling::parsec_table2().center();
    const auto p = parsec::ParsecParams::from_span({c.data(), 11});
    for (auto _ : state) benchmark::DoNotOptimize(parsec::solve_coefficients(p));
}
BENCHMARK(BM_ParsecSolve);

static void BM_PanelSurrogate(benchmark::State& state) {
    const auto panel = qoi::panel_surrogate(qoi::Parameterization::Parsec, sampling::parsec_table2());
    const Eigen::VectorXd x = Eigen::VectorXd::Zero(11);
    for (auto _ : state) benchmark::DoNotOptimize(panel.lift->evaluate(x));
}
BENCHMARK(BM_PanelSurrogate);
BENCHMARK_MAIN();
