// Serial reference against the OpenMP kernels on a catenoid at desk scale.
#include <benchmark/benchmark.h>

#include <random>

#include "ancient/kernels.hpp"
#include "ancient/spectral.hpp"

namespace {

using namespace ancient;

struct Fixture {
  Fixture()
      : grid(build_grid(Hypersurface::catenoid(), 6.0, 401, 3)),
        data(negative_spectrum(grid)),
        sg(data),
        time(20.0, 128) {
    field = SpaceTimeField::zero(time, grid.Ns);
    for (int m = 0; m < time.size(); ++m)
      for (int j = 0; j < grid.Ns; ++j)
        field.values(j, m) = 0.01 * std::exp(-grid.s[j] * grid.s[j] + 0.1 * time.t(m));
    field = SpaceTimeField::from_values(time, field.values);
    params = WeightParams{2.5, 0.5, 0.28};
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> node(2, grid.Ns - 3);
    std::uniform_real_distribution<double> t(1.0, 8.0);
    for (int i = 0; i < 256; ++i) {
      KernelSample s{};
      s.x = node(rng);
      s.y = node(rng);
      s.t = t(rng);
      samples.push_back(s);
    }
  }
  Grid grid;
  SpectralData data;
  Semigroup sg;
  TimeGrid time;
  SpaceTimeField field;
  WeightParams params;
  std::vector<KernelSample> samples;
};

Fixture& fixture() {
  static Fixture f;
  return f;
}

Exec exec_of(const benchmark::State& state) {
  return state.range(0) ? Exec::parallel : Exec::serial;
}

void BM_ModeSpectra(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(mode_spectra(f.grid, 8, exec_of(state)));
}

void BM_NonlinearError(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(nonlinear_error_slices(f.grid, f.field.values, exec_of(state)));
}

void BM_StarNorm(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state)
    benchmark::DoNotOptimize(star_slices(f.grid, f.field, f.params, exec_of(state)));
}

void BM_KernelSamples(benchmark::State& state) {
  auto& f = fixture();
  for (auto _ : state) benchmark::DoNotOptimize(kernel_samples(f.sg, f.samples, exec_of(state)));
}

}  // namespace

BENCHMARK(BM_ModeSpectra)->Arg(0)->Arg(1)->ArgName("parallel");
BENCHMARK(BM_NonlinearError)->Arg(0)->Arg(1)->ArgName("parallel");
BENCHMARK(BM_StarNorm)->Arg(0)->Arg(1)->ArgName("parallel");
BENCHMARK(BM_KernelSamples)->Arg(0)->Arg(1)->ArgName("parallel");

BENCHMARK_MAIN();
