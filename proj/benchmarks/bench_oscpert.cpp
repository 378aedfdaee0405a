#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "oscpert/dyson.hpp"
#include "oscpert/experiments.hpp"
#include "oscpert/three_mode.hpp"

namespace {

using namespace oscpert;
using experiments::BenchmarkId;
using experiments::registry;

const ComplexVector kUniform(3, Complex(1.0 / std::sqrt(3.0), 0.0));

ComplexMatrix random_matrix(std::size_t n) {
    std::mt19937_64 rng(n);
    std::normal_distribution<double> g;
    ComplexMatrix m(n, n);
    for (auto& z : m.data()) z = Complex(g(rng), g(rng));
    return m;
}

void BM_Eigenvalues(benchmark::State& state) {
    const ComplexMatrix m = random_matrix(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(m));
}
BENCHMARK(BM_Eigenvalues)->Arg(3)->Arg(8)->Arg(32);

void BM_MatrixExponential(benchmark::State& state) {
    const ComplexMatrix g = three_mode::evolution_generator(registry(BenchmarkId::num_ex_l));
    const double t = static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(matrix_exponential_apply(g, t, kUniform));
}
BENCHMARK(BM_MatrixExponential)->Arg(1)->Arg(10);

void BM_DysonTerms(benchmark::State& state) {
    const auto sys = three_mode::perturbed_system(registry(BenchmarkId::num_ex_s));
    const auto order = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(dyson::terms(sys, order, 1.0, kUniform, 4000));
}
BENCHMARK(BM_DysonTerms)->Arg(3)->Arg(9);

void BM_Psi1Infinite(benchmark::State& state) {
    const auto m = registry(BenchmarkId::num_ex_s);
    SeriesTruncation trunc;
    trunc.k_max = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(three_mode::psi1_infinite(m, 1.0, kUniform, trunc));
}
BENCHMARK(BM_Psi1Infinite)->Arg(3)->Arg(6);

void BM_Sweep(benchmark::State& state) {
    experiments::SweepConfig cfg;
    cfg.model = BenchmarkId::num_ex_m;
    cfg.steps = 101;
    for (auto _ : state) benchmark::DoNotOptimize(experiments::sweep_text(cfg));
}
BENCHMARK(BM_Sweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
