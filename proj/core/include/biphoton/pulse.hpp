#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <utility>

namespace biphoton::pulse {

enum class Shape { TopHat, Gaussian };

/// Input pulse parameters, all times in units of 1/gamma.
struct PulseParams {
  Shape shape = Shape::Gaussian;
  double t_p = 1.0;      // top-hat segment duration
  double sigma_t = 1.0;  // Gaussian standard deviation
  double t_c = 4.0;      // first peak center
  double t_b = 8.0;      // peak-to-peak separation
  double alpha = 0.0;    // correlation mixing parameter in [0, 0.5]

  void validate() const;
};

/// A continuous temporal envelope with a finite support hint.
struct ContinuousEnvelope {
  std::function<double(double)> f;
  double support_lo = 0.0;
  double support_hi = 0.0;

  double operator()(double t) const { return f(t); }
};

double tophat_two_photon_envelope(double t, const PulseParams& p);
double gaussian_two_peak_envelope(double t, const PulseParams& p);
double gaussian_single_envelope(double t, double center, double sigma_t);

ContinuousEnvelope tophat_two_photon(const PulseParams& p);
std::pair<ContinuousEnvelope, ContinuousEnvelope> tophat_single_envelopes(const PulseParams& p);
ContinuousEnvelope gaussian_two_peak(const PulseParams& p);
ContinuousEnvelope gaussian_single(double center, double sigma_t);

/// Discretized envelope, f_k = f(t_k) sqrt(dt) sampled at bin midpoints,
/// renormalized so that sum |f_k|^2 = 1 exactly.
struct EnvelopeGrid {
  double dt = 0.0;
  double t0 = 0.0;  // left edge of bin 0
  Eigen::VectorXcd values;
  double rescale_factor = 1.0;  // applied to reach exact unit norm

  int size() const { return static_cast<int>(values.size()); }
  double bin_mid(int k) const { return t0 + (k + 0.5) * dt; }
  double norm_sq() const { return values.squaredNorm(); }
};

/// Samples an envelope onto uniform bins over [t_start, t_end).
/// Fails if the window truncates more than eps of the square norm.
EnvelopeGrid discretize_envelope(const ContinuousEnvelope& env, double dt, double t_start,
                                 double t_end, double eps = 1e-6);

}  // namespace biphoton::pulse
