#include "biphoton/scattering.hpp"

#include <cmath>
#include <stdexcept>

namespace biphoton::scatter {

Complex transmission_coefficient(double omega, double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("gamma must be > 0");
  return Complex(omega, -0.5 * gamma) / Complex(omega, 0.5 * gamma);
}

Complex nonlinear_kernel(double omega, double gamma) {
  if (gamma <= 0.0) throw std::invalid_argument("gamma must be > 0");
  return std::sqrt(gamma) / Complex(omega, 0.5 * gamma);
}

pulse::TwoPhotonSpectrum scatter_two_photon(const pulse::TwoPhotonSpectrum& f_in, double gamma,
                                            bool include_nonlinear) {
  const auto& grid = f_in.grid;
  const int n = grid.n;
  const double dw = grid.domega();
  if (dw > gamma / 10.0)
    throw std::invalid_argument("frequency grid too coarse: need domega <= gamma/10");
  if (std::abs(f_in.norm_sq() - 1.0) > 1e-6)
    throw std::invalid_argument("scatter_two_photon: input spectrum is not unit-norm");

  Eigen::VectorXcd tcoef(n), skern(n);
  for (int k = 0; k < n; ++k) {
    tcoef[k] = transmission_coefficient(grid.omega(k), gamma);
    skern[k] = nonlinear_kernel(grid.omega(k), gamma);
  }

  pulse::TwoPhotonSpectrum out;
  out.grid = grid;
  out.values = tcoef.asDiagonal() * f_in.values * tcoef.asDiagonal();

  if (include_nonlinear) {
    // energy-conserving line integrals: for each anti-diagonal i+j = D,
    // I(D) = dw * sum_k [s(w_k) + s(w_{D-k})] f(w_k, w_{D-k})
    Eigen::VectorXcd line = Eigen::VectorXcd::Zero(2 * n - 1);
    for (int d = 0; d < 2 * n - 1; ++d) {
      const int k_lo = std::max(0, d - n + 1);
      const int k_hi = std::min(n - 1, d);
      Complex acc = 0.0;
      for (int k = k_lo; k <= k_hi; ++k)
        acc += (skern[k] + skern[d - k]) * f_in.values(k, d - k);
      line[d] = acc * dw;
    }
    // S applied to the symmetrized amplitude carries a combinatorial factor
    // of 1/2; the remaining prefactor is i sqrt(gamma)/pi from the T kernel.
    const Complex pref = Complex(0.0, 1.0) * std::sqrt(gamma) / M_PI * 0.5;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out.values(i, j) += pref * skern[i] * skern[j] * line[i + j];
  }

  // exact exchange symmetry (the construction preserves it; enforce bit-wise)
  out.values = 0.5 * (out.values + out.values.transpose().eval());

  const double norm = std::sqrt(out.norm_sq());
  if (include_nonlinear && std::abs(norm - 1.0) > 1e-3)
    throw std::runtime_error("scatter_two_photon: output norm " + std::to_string(norm) +
                             " deviates from 1 by more than 1e-3; grid under-resolved");
  return out;
}

Eigen::MatrixXcd time_transform_matrix(const pulse::FrequencyGrid& fg, const TimeGrid& tg) {
  if (tg.dt > M_PI / fg.omega_max)
    throw std::invalid_argument("time grid not Nyquist-compatible with the frequency window");
  Eigen::MatrixXcd m(tg.n, fg.n);
  const double c = fg.domega() / std::sqrt(2.0 * M_PI);
  for (int i = 0; i < tg.n; ++i)
    for (int k = 0; k < fg.n; ++k)
      m(i, k) = c * std::exp(Complex(0.0, -fg.omega(k) * tg.t(i)));
  return m;
}

TwoPhotonAmplitude spectrum_to_time_amplitude(const pulse::TwoPhotonSpectrum& f,
                                              const TimeGrid& tg) {
  const Eigen::MatrixXcd m = time_transform_matrix(f.grid, tg);
  TwoPhotonAmplitude phi;
  phi.grid = tg;
  phi.values = m * f.values * m.transpose();

  // aliasing check: the time window must capture the state
  const double total = phi.norm_sq();
  const int edge = std::max(1, tg.n / 20);
  double outer = 0.0;
  for (int i = 0; i < tg.n; ++i)
    for (int j = 0; j < tg.n; ++j)
      if (i >= tg.n - edge || j >= tg.n - edge)
        outer += std::norm(phi.values(i, j)) * tg.dt * tg.dt;
  if (total > 0.5 && outer / total > 1e-4)
    throw std::runtime_error(
        "spectrum_to_time_amplitude: significant amplitude at the time-window edge "
        "(aliasing or window too short)");
  return phi;
}

Eigen::VectorXcd spectrum_to_time_1d(const pulse::SpectralAmplitude& g, const TimeGrid& tg) {
  return time_transform_matrix(g.grid, tg) * g.values;
}

Eigen::VectorXd transmitted_flux(const TwoPhotonAmplitude& phi) {
  return 2.0 * phi.grid.dt * phi.values.cwiseAbs2().rowwise().sum();
}

CorrelationMap g2_map(const TwoPhotonAmplitude& phi) {
  CorrelationMap map;
  map.second_order = true;
  map.t.resize(phi.grid.n);
  for (int i = 0; i < phi.grid.n; ++i) map.t[i] = phi.grid.t(i);
  map.values = 2.0 * phi.values.cwiseAbs2();
  return map;
}

CorrelationMap g1_map(const TwoPhotonAmplitude& phi) {
  CorrelationMap map;
  map.second_order = false;
  map.t.resize(phi.grid.n);
  for (int i = 0; i < phi.grid.n; ++i) map.t[i] = phi.grid.t(i);
  map.values = 2.0 * phi.grid.dt * (phi.values.conjugate() * phi.values.transpose());
  return map;
}

Eigen::VectorXd tls_population_by_continuity(const Eigen::VectorXd& n_in,
                                             const Eigen::VectorXd& n_t, double dt,
                                             double final_tol) {
  if (n_in.size() != n_t.size())
    throw std::invalid_argument("tls_population_by_continuity: series lengths differ");
  const int n = static_cast<int>(n_in.size());
  Eigen::VectorXd pop(n);
  double acc = 0.0, prev = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = n_in[i] - n_t[i];
    acc += 0.5 * (prev + d) * dt;  // trapezoid
    prev = d;
    pop[i] = acc;
  }
  if (std::abs(pop[n - 1]) > final_tol)
    throw std::runtime_error(
        "tls_population_by_continuity: final population " + std::to_string(pop[n - 1]) +
        " does not return to zero; window too short or grids inconsistent");
  return pop;
}

Eigen::VectorXd input_flux(const pulse::TwoPhotonSpectrum& f_in, const TimeGrid& tg) {
  return transmitted_flux(spectrum_to_time_amplitude(f_in, tg));
}

}  // namespace biphoton::scatter
