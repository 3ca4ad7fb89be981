#pragma once

#include <Eigen/Dense>
#include <complex>

#include "biphoton/observables.hpp"
#include "biphoton/spectrum.hpp"

namespace biphoton::scatter {

using Complex = std::complex<double>;

/// Single-photon transmission coefficient of the resonant chiral TLS,
/// t(w) = (-i gamma/2 + w) / (i gamma/2 + w).  Unimodular.
Complex transmission_coefficient(double omega, double gamma);

/// Nonlinear scattering kernel s(w) = sqrt(gamma) / (w + i gamma/2).
Complex nonlinear_kernel(double omega, double gamma);

/// Applies the two-photon S-matrix: linear part t(v1) t(v2) f(v1,v2) plus the
/// energy-conserving nonlinear line integral along grid anti-diagonals.
/// Unitary: the output norm must stay within 1e-3 of 1, else the grid is
/// under-resolved.
pulse::TwoPhotonSpectrum scatter_two_photon(const pulse::TwoPhotonSpectrum& f_in, double gamma,
                                            bool include_nonlinear = true);

/// Uniform output time grid.
struct TimeGrid {
  double t0 = 0.0;
  double dt = 0.02;
  int n = 0;

  double t(int i) const { return t0 + i * dt; }
};

/// Symmetric two-time amplitude phi(t_i, t_j), Fourier dual of a two-photon
/// spectrum under the e^{+i w t} convention for a_in(w).
struct TwoPhotonAmplitude {
  TimeGrid grid;
  Eigen::MatrixXcd values;

  double norm_sq() const { return values.squaredNorm() * grid.dt * grid.dt; }
};

/// 1-D transform matrix M(i,k) = domega/sqrt(2 pi) * exp(-i omega_k t_i).
Eigen::MatrixXcd time_transform_matrix(const pulse::FrequencyGrid& fg, const TimeGrid& tg);

TwoPhotonAmplitude spectrum_to_time_amplitude(const pulse::TwoPhotonSpectrum& f,
                                              const TimeGrid& tg);
Eigen::VectorXcd spectrum_to_time_1d(const pulse::SpectralAmplitude& g, const TimeGrid& tg);

/// n_T(t_i) = 2 sum_j |phi(t_i,t_j)|^2 dt; integrates to the photon number 2.
Eigen::VectorXd transmitted_flux(const TwoPhotonAmplitude& phi);

/// G2(t_i,t_j) = 2 |phi(t_i,t_j)|^2.
CorrelationMap g2_map(const TwoPhotonAmplitude& phi);
/// G1(t_i,t_j) = 2 sum_s conj(phi(t_i,s)) phi(t_j,s) dt;  G1(t,t) = n_T(t).
CorrelationMap g1_map(const TwoPhotonAmplitude& phi);

/// TLS population from photon-number continuity in a lossless chiral channel:
/// n_TLS(t) = int_0^t (n_in - n_T) dt'.  Errors if the final value does not
/// return to zero within tol.
Eigen::VectorXd tls_population_by_continuity(const Eigen::VectorXd& n_in,
                                             const Eigen::VectorXd& n_t, double dt,
                                             double final_tol = 1e-3);

/// Input-side flux, 2 sum_j |phi_in(t_i,t_j)|^2 dt of the unscattered state.
Eigen::VectorXd input_flux(const pulse::TwoPhotonSpectrum& f_in, const TimeGrid& tg);

}  // namespace biphoton::scatter
