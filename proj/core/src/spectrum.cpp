#include "biphoton/spectrum.hpp"

#include <cmath>

namespace biphoton::pulse {

SpectralAmplitude gaussian_spectral_amplitude(const FrequencyGrid& grid, double sigma_t,
                                              double center) {
  if (sigma_t <= 0.0) throw std::invalid_argument("sigma_t must be > 0");
  SpectralAmplitude g;
  g.grid = grid;
  g.values.resize(grid.n);
  for (int k = 0; k < grid.n; ++k) {
    const double w = grid.omega(k);
    g.values[k] = std::exp(std::complex<double>(-0.5 * sigma_t * sigma_t * w * w, w * center));
  }
  return g;
}

std::pair<SpectralAmplitude, SpectralAmplitude> mixed_spectra(double alpha,
                                                              const SpectralAmplitude& g1,
                                                              const SpectralAmplitude& g2) {
  if (alpha < 0.0 || alpha > 0.5) throw std::invalid_argument("alpha must lie in [0, 0.5]");
  if (!(g1.grid == g2.grid)) throw std::invalid_argument("mixed_spectra: mismatched grids");
  SpectralAmplitude f1{g1.grid, (1.0 - alpha) * g1.values + alpha * g2.values};
  SpectralAmplitude f2{g1.grid, alpha * g1.values + (1.0 - alpha) * g2.values};
  return {f1, f2};
}

TwoPhotonSpectrum symmetrized_two_photon_spectrum(const SpectralAmplitude& f1,
                                                  const SpectralAmplitude& f2) {
  if (!(f1.grid == f2.grid))
    throw std::invalid_argument("symmetrized_two_photon_spectrum: mismatched grids");
  const double w = f1.grid.domega();
  const double n1 = f1.values.squaredNorm() * w;
  const double n2 = f2.values.squaredNorm() * w;
  if (n1 <= 0.0 || n2 <= 0.0)
    throw std::invalid_argument("symmetrized_two_photon_spectrum: zero-norm input");
  const std::complex<double> ip = (f1.values.adjoint() * f2.values)(0, 0) * w;
  const double k = 1.0 / std::sqrt(2.0 * n1 * n2 + 2.0 * std::norm(ip));

  TwoPhotonSpectrum f;
  f.grid = f1.grid;
  f.values = k * (f1.values * f2.values.transpose() + f2.values * f1.values.transpose());
  return f;
}

}  // namespace biphoton::pulse
