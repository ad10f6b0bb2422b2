#include <benchmark/benchmark.h>

#include "qvrad/analogue.hpp"
#include "qvrad/radiation.hpp"
#include "qvrad/spectrum.hpp"

using namespace qvrad;

namespace {

void numeric_spectrum_grid(benchmark::State& state)
{
    auto p = PulseProfile::anisotropic(0.01, 1.0, 2.0, 0.5, 1.5);
    GridSpec g;
    auto n = static_cast<std::size_t>(state.range(0));
    g.points = {n, n, n, n};
    g.half_extent = 6.0 * static_cast<double>(n) / 45.0;
    for (auto _ : state)
        benchmark::DoNotOptimize(numeric_spectrum(p, g));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n * n * n * n));
}
BENCHMARK(numeric_spectrum_grid)->Arg(45)->Arg(61)->Unit(benchmark::kMillisecond);

void closed_form_probability(benchmark::State& state)
{
    auto p = PulseProfile::anisotropic(0.01, 1.0, 1.0 / 30.0, 1.0 / 30.0);
    auto s = analytic_spectrum(p);
    IntegratorSpec spec;
    for (auto _ : state)
        benchmark::DoNotOptimize(total_probability(s, p.n0(), spec));
}
BENCHMARK(closed_form_probability)->Unit(benchmark::kMicrosecond);

void grid_probability(benchmark::State& state)
{
    auto p = PulseProfile::one_parameter(0.01, 1.0);
    auto s = numeric_spectrum(p);
    IntegratorSpec spec;
    spec.tolerance = 1e-3;
    for (auto _ : state)
        benchmark::DoNotOptimize(total_probability(s, p.n0(), spec));
}
BENCHMARK(grid_probability)->Unit(benchmark::kMillisecond);

void mc_probability(benchmark::State& state)
{
    auto p = PulseProfile::one_parameter(0.01, 1.0);
    auto s = analytic_spectrum(p);
    auto workers = static_cast<unsigned>(state.range(0));
    std::size_t n = std::size_t{1} << 18;
    for (auto _ : state)
        benchmark::DoNotOptimize(mc_oracle(s, p.n0(), 7, n, Observable::Probability, workers));
    state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(mc_probability)->Arg(1)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

void superluminal_rate(benchmark::State& state)
{
    auto p = PulseProfile::moving(0.01, 1.0, {0.8, 0, 0}, 1.5);
    auto fs = moving_spectrum(p);
    IntegratorSpec spec;
    for (auto _ : state)
        benchmark::DoNotOptimize(emission_rate(fs, p.n0(), spec));
}
BENCHMARK(superluminal_rate)->Unit(benchmark::kMicrosecond);

void horizon_search(benchmark::State& state)
{
    auto p = PulseProfile::moving(0.1, 1.0, {0.64, 0, 0}, 1.5);
    for (auto _ : state)
        benchmark::DoNotOptimize(find_horizons(p, 0.64));
}
BENCHMARK(horizon_search)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
