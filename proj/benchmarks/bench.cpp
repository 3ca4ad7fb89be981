#include <benchmark/benchmark.h>

#include "biphoton/evolution.hpp"
#include "biphoton/mps.hpp"
#include "biphoton/pulse.hpp"
#include "biphoton/scattering.hpp"
#include "biphoton/spectrum.hpp"

using namespace biphoton;

namespace {

pulse::EnvelopeGrid gaussian_grid(double dt, double window) {
  return pulse::discretize_envelope(pulse::gaussian_single(4.0, 1.0), dt, 0.0, window, 1e-4);
}

void BM_mps_evolve_two_photon(benchmark::State& state) {
  const double dt = 1.0 / static_cast<double>(state.range(0));
  pulse::PulseParams pp;
  pp.shape = pulse::Shape::Gaussian;
  pp.sigma_t = 1.0;
  pp.t_c = 4.0;
  pp.t_b = 4.0;
  const auto grid =
      pulse::discretize_envelope(pulse::gaussian_two_peak(pp), dt, 0.0, 23.0, 1e-4);
  for (auto _ : state) {
    auto psi = mps::build_two_photon_mps(grid);
    mps::EvolutionParams p;
    auto rec = mps::evolve(psi, p);
    benchmark::DoNotOptimize(rec.series.n_tls);
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_mps_evolve_two_photon)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_mps_single_photon_step_rate(benchmark::State& state) {
  const auto grid = gaussian_grid(0.01, 19.0);
  for (auto _ : state) {
    auto psi = mps::build_single_photon_mps(grid);
    mps::EvolutionParams p;
    auto rec = mps::evolve(psi, p);
    benchmark::DoNotOptimize(rec.series.n_tls);
  }
  state.SetItemsProcessed(state.iterations() * grid.size());
}
BENCHMARK(BM_mps_single_photon_step_rate)->Unit(benchmark::kMillisecond);

void BM_scatter_two_photon(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  pulse::FrequencyGrid fg{30.0, n};
  const auto g1 = pulse::gaussian_spectral_amplitude(fg, 1.0, 4.0);
  const auto g2 = pulse::gaussian_spectral_amplitude(fg, 1.0, 12.0);
  const auto [f1, f2] = pulse::mixed_spectra(0.5, g1, g2);
  const auto f_in = pulse::symmetrized_two_photon_spectrum(f1, f2);
  for (auto _ : state) {
    auto f_out = scatter::scatter_two_photon(f_in, 1.0);
    benchmark::DoNotOptimize(f_out.values);
  }
}
BENCHMARK(BM_scatter_two_photon)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

void BM_spectrum_to_time(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  pulse::FrequencyGrid fg{30.0, n};
  const auto g1 = pulse::gaussian_spectral_amplitude(fg, 1.0, 4.0);
  const auto g2 = pulse::gaussian_spectral_amplitude(fg, 1.0, 12.0);
  const auto [f1, f2] = pulse::mixed_spectra(0.5, g1, g2);
  const auto f_out =
      scatter::scatter_two_photon(pulse::symmetrized_two_photon_spectrum(f1, f2), 1.0);
  scatter::TimeGrid tg{0.0, 0.02, 1351};
  for (auto _ : state) {
    auto phi = scatter::spectrum_to_time_amplitude(f_out, tg);
    benchmark::DoNotOptimize(phi.values);
  }
}
BENCHMARK(BM_spectrum_to_time)->Arg(1024)->Arg(2048)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
