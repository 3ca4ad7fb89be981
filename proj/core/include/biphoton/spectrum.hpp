#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace biphoton::pulse {

/// Uniform frequency grid, detunings from the carrier, symmetric about 0.
struct FrequencyGrid {
  double omega_max = 30.0;
  int n = 1024;

  double omega_min() const { return -omega_max; }
  double domega() const { return 2.0 * omega_max / (n - 1); }
  double omega(int k) const { return -omega_max + k * domega(); }

  bool operator==(const FrequencyGrid&) const = default;
};

/// Complex single-photon spectral amplitude on a frequency grid (unnormalized;
/// normalization flows through the two-photon constant K).
struct SpectralAmplitude {
  FrequencyGrid grid;
  Eigen::VectorXcd values;

  /// Discrete L2 norm squared with quadrature weight domega.
  double norm_sq() const { return values.squaredNorm() * grid.domega(); }
};

SpectralAmplitude gaussian_spectral_amplitude(const FrequencyGrid& grid, double sigma_t,
                                              double center);

/// f1 = (1-alpha) g1 + alpha g2, f2 = alpha g1 + (1-alpha) g2.
std::pair<SpectralAmplitude, SpectralAmplitude> mixed_spectra(double alpha,
                                                              const SpectralAmplitude& g1,
                                                              const SpectralAmplitude& g2);

/// Symmetric two-photon spectral amplitude f(omega_i, omega_j), unit discrete
/// L2 norm with quadrature weight domega^2.
struct TwoPhotonSpectrum {
  FrequencyGrid grid;
  Eigen::MatrixXcd values;

  double norm_sq() const {
    const double w = grid.domega();
    return values.squaredNorm() * w * w;
  }
};

/// f(w1,w2) = K [f1(w1) f2(w2) + f1(w2) f2(w1)], K > 0 fixed from the Gram
/// data of f1, f2 so the result has unit norm.
TwoPhotonSpectrum symmetrized_two_photon_spectrum(const SpectralAmplitude& f1,
                                                  const SpectralAmplitude& f2);

}  // namespace biphoton::pulse
