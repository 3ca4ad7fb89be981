#include "biphoton/pulse.hpp"

#include <cmath>

namespace biphoton::pulse {

void PulseParams::validate() const {
  if (shape == Shape::TopHat && t_p <= 0.0) throw std::invalid_argument("pulse.t_p must be > 0");
  if (shape == Shape::Gaussian && sigma_t <= 0.0)
    throw std::invalid_argument("pulse.sigma_t must be > 0");
  if (t_b < 0.0) throw std::invalid_argument("pulse.t_b must be >= 0");
  if (alpha < 0.0 || alpha > 0.5) throw std::invalid_argument("pulse.alpha must lie in [0, 0.5]");
}

double tophat_two_photon_envelope(double t, const PulseParams& p) {
  if (p.t_b < p.t_p)
    throw std::invalid_argument("two-photon top-hat requires t_b >= t_p (non-overlapping segments)");
  const double a = 1.0 / std::sqrt(2.0 * p.t_p);
  if ((t >= 0.0 && t <= p.t_p) || (t >= p.t_b && t <= p.t_b + p.t_p)) return a;
  return 0.0;
}

double gaussian_two_peak_envelope(double t, const PulseParams& p) {
  const double s2 = 2.0 * p.sigma_t * p.sigma_t;
  const double cinv =
      std::sqrt(2.0 * p.sigma_t * std::sqrt(M_PI) *
                (1.0 + std::exp(-p.t_b * p.t_b / (4.0 * p.sigma_t * p.sigma_t))));
  const double d1 = t - p.t_c;
  const double d2 = t - (p.t_c + p.t_b);
  return (std::exp(-d1 * d1 / s2) + std::exp(-d2 * d2 / s2)) / cinv;
}

double gaussian_single_envelope(double t, double center, double sigma_t) {
  const double d = t - center;
  return std::exp(-d * d / (2.0 * sigma_t * sigma_t)) /
         std::sqrt(sigma_t * std::sqrt(M_PI));
}

ContinuousEnvelope tophat_two_photon(const PulseParams& p) {
  if (p.t_b < p.t_p)
    throw std::invalid_argument("two-photon top-hat requires t_b >= t_p (non-overlapping segments)");
  return {[p](double t) { return tophat_two_photon_envelope(t, p); }, 0.0, p.t_b + p.t_p};
}

std::pair<ContinuousEnvelope, ContinuousEnvelope> tophat_single_envelopes(const PulseParams& p) {
  if (p.t_b < p.t_p)
    throw std::invalid_argument("overlapping single-photon envelopes not representable (t_b < t_p)");
  const double a = 1.0 / std::sqrt(p.t_p);
  const double tp = p.t_p, tb = p.t_b;
  ContinuousEnvelope e1{[a, tp](double t) { return (t >= 0.0 && t <= tp) ? a : 0.0; }, 0.0, tp};
  ContinuousEnvelope e2{
      [a, tp, tb](double t) { return (t >= tb && t <= tb + tp) ? a : 0.0; }, tb, tb + tp};
  return {e1, e2};
}

ContinuousEnvelope gaussian_two_peak(const PulseParams& p) {
  return {[p](double t) { return gaussian_two_peak_envelope(t, p); },
          p.t_c - 8.0 * p.sigma_t, p.t_c + p.t_b + 8.0 * p.sigma_t};
}

ContinuousEnvelope gaussian_single(double center, double sigma_t) {
  if (sigma_t <= 0.0) throw std::invalid_argument("sigma_t must be > 0");
  return {[center, sigma_t](double t) { return gaussian_single_envelope(t, center, sigma_t); },
          center - 8.0 * sigma_t, center + 8.0 * sigma_t};
}

EnvelopeGrid discretize_envelope(const ContinuousEnvelope& env, double dt, double t_start,
                                 double t_end, double eps) {
  if (dt <= 0.0) throw std::invalid_argument("dt must be > 0");
  if (t_end <= t_start) throw std::invalid_argument("empty discretization window");

  const int m = static_cast<int>(std::llround((t_end - t_start) / dt));
  EnvelopeGrid g;
  g.dt = dt;
  g.t0 = t_start;
  g.values.resize(m);
  const double sdt = std::sqrt(dt);
  for (int k = 0; k < m; ++k) g.values[k] = env(g.bin_mid(k)) * sdt;

  const double captured = g.values.squaredNorm();
  if (captured < 1.0 - eps) {
    throw std::runtime_error(
        "discretization window [" + std::to_string(t_start) + ", " + std::to_string(t_end) +
        ") truncates " + std::to_string(1.0 - captured) +
        " of the envelope square norm; enlarge the window (support hint [" +
        std::to_string(env.support_lo) + ", " + std::to_string(env.support_hi) + "])");
  }
  g.rescale_factor = 1.0 / std::sqrt(captured);
  g.values *= g.rescale_factor;
  return g;
}

}  // namespace biphoton::pulse
