#include "biphoton/validate.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "biphoton/evolution.hpp"
#include "biphoton/experiment.hpp"
#include "biphoton/mps.hpp"
#include "biphoton/scattering.hpp"

namespace biphoton::runner {

namespace {

using Complex = std::complex<double>;

// RK4 integration of the single-photon TLS amplitude,
//   c'(t) = -(gamma/2) c - i sqrt(gamma) f(t),
// returning the population |c|^2 on the same grid as `t`.
Eigen::VectorXd ode_population(const std::function<double(double)>& f, const Eigen::VectorXd& t,
                               double gamma) {
  Eigen::VectorXd pop(t.size());
  Complex c = 0.0;
  auto rhs = [&](double time, Complex cv) {
    return -0.5 * gamma * cv - Complex(0.0, std::sqrt(gamma)) * f(time);
  };
  double prev = t[0];
  // integrate from 0 to the first sample, then sample to sample
  const int sub = 4;
  auto advance = [&](double from, double to) {
    const double h = (to - from) / sub;
    for (int s = 0; s < sub; ++s) {
      const double x = from + s * h;
      const Complex k1 = rhs(x, c);
      const Complex k2 = rhs(x + 0.5 * h, c + 0.5 * h * k1);
      const Complex k3 = rhs(x + 0.5 * h, c + 0.5 * h * k2);
      const Complex k4 = rhs(x + h, c + h * k3);
      c += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  };
  advance(0.0, prev);
  pop[0] = std::norm(c);
  for (int i = 1; i < t.size(); ++i) {
    advance(prev, t[i]);
    prev = t[i];
    pop[i] = std::norm(c);
  }
  return pop;
}

CheckResult make(const std::string& name, double value, double tol, const std::string& detail) {
  return {name, value <= tol, value, tol, detail};
}

double decay_max_error(double dt) {
  const double t_end = 8.0;
  auto psi = mps::build_vacuum(static_cast<int>(std::llround(t_end / dt)), dt);
  psi.sites[0].blocks[0](0, 0) = 0.0;  // flip the TLS to the excited state
  psi.sites[0].blocks[1](0, 0) = 1.0;
  mps::EvolutionParams p;
  auto rec = mps::evolve(psi, p);
  double worst = 0.0;
  for (int i = 0; i < rec.series.t.size(); ++i)
    worst = std::max(worst, std::abs(rec.series.n_tls[i] - std::exp(-rec.series.t[i])));
  return worst;
}

}  // namespace

std::vector<CheckResult> run_validation_suite(bool quick) {
  std::vector<CheckResult> out;
  const double gamma = 1.0;

  // 1. spontaneous decay against the analytic law, with dt refinement
  {
    const double e1 = decay_max_error(0.01);
    out.push_back(make("decay_law", e1, 2e-3, "max |n_TLS - e^{-t}| at dt=0.01"));
    if (!quick) {
      const double e2 = decay_max_error(0.005);
      out.push_back(make("decay_law_refinement", e2 / e1, 0.75,
                         "error ratio dt=0.005 vs dt=0.01 (expect ~0.5)"));
    }
  }

  // 2. single-photon top-hat peak population against the closed form
  {
    const double dt = 0.01;
    const int m = static_cast<int>(std::llround(16.0 / dt));
    pulse::ContinuousEnvelope full{[](double t) { return t < 1.0 ? 1.0 : 0.0; }, 0.0, 1.0};
    auto fgrid = pulse::discretize_envelope(full, dt, 0.0, m * dt, 1e-9);
    auto state = mps::build_single_photon_mps(fgrid);
    mps::EvolutionParams ep;
    auto rec = mps::evolve(state, ep);
    const double peak = rec.series.n_tls.maxCoeff();
    const double exact = 4.0 * std::pow(1.0 - std::exp(-0.5), 2.0);
    out.push_back(make("tophat_peak_population", std::abs(peak - exact), 5e-3,
                       "single-photon top-hat peak vs 4(1-e^{-1/2})^2"));
  }

  // 3. single-photon Gaussian vs the amplitude-ODE oracle, both engines
  {
    const double sigma = 1.0, t_c = 4.0;
    auto f = [&](double t) {
      return std::pow(sigma * std::sqrt(M_PI), -0.5) *
             std::exp(-(t - t_c) * (t - t_c) / (2.0 * sigma * sigma));
    };
    const double dt = 0.01, t_end = 19.0;
    auto env = pulse::gaussian_single(t_c, sigma);
    auto grid = pulse::discretize_envelope(env, dt, 0.0, t_end, 1e-4);
    auto state = mps::build_single_photon_mps(grid);
    mps::EvolutionParams ep;
    auto rec = mps::evolve(state, ep);
    const Eigen::VectorXd oracle_mps = ode_population(f, rec.series.t, gamma);
    const double mps_err = (rec.series.n_tls - oracle_mps).cwiseAbs().maxCoeff();
    out.push_back(
        make("gaussian_single_photon_mps", mps_err, 1e-2, "peak vs ODE oracle, MPS engine"));

    GridConfig grids;
    grids.t_end = t_end;
    auto series = scattering_single_photon(sigma, t_c, grids, gamma);
    const Eigen::VectorXd oracle_sc = ode_population(f, series.t, gamma);
    const double sc_err = (series.n_tls - oracle_sc).cwiseAbs().maxCoeff();
    out.push_back(make("gaussian_single_photon_scattering", sc_err, 1e-2,
                       "population vs ODE oracle, scattering engine"));
  }

  // 4. S-matrix unitarity with grid doubling
  {
    auto defect = [&](int n) {
      pulse::FrequencyGrid fg{30.0, n};
      const auto g1 = pulse::gaussian_spectral_amplitude(fg, 1.0, 4.0);
      const auto g2 = pulse::gaussian_spectral_amplitude(fg, 1.0, 12.0);
      const auto [f1, f2] = pulse::mixed_spectra(0.5, g1, g2);
      const auto f_in = pulse::symmetrized_two_photon_spectrum(f1, f2);
      const auto f_out = scatter::scatter_two_photon(f_in, gamma);
      return std::abs(std::sqrt(f_out.norm_sq()) - 1.0);
    };
    const double d1 = defect(1024);
    out.push_back(make("unitarity", d1, 1e-3, "| ||f_out|| - 1 | at n=1024"));
    if (!quick) {
      const double d2 = defect(2048);
      out.push_back(
          make("unitarity_grid_doubling", d2, std::max(d1 * 1.1, 1e-12), "defect at n=2048"));
    }
  }

  // 5. photon-number conservation, scattering engine
  {
    ExperimentConfig cfg;
    cfg.engine = Engine::Scattering;
    cfg.input_state = InputState::Two;
    cfg.pulse.t_b = 8.0;
    auto res = run_scattering_engine(cfg);
    const double dt = res.series.t[1] - res.series.t[0];
    const double n_in = res.series.n_in.sum() * dt;
    const double n_t = res.series.n_t.sum() * dt;
    out.push_back(make("photon_number_in", std::abs(n_in - 2.0), 1e-3, "integral of n_in"));
    out.push_back(make("photon_number_out", std::abs(n_t - 2.0), 1e-3, "integral of n_T"));
  }

  // 6. excitation conservation, MPS engine (top-hat |2>, cheap window)
  {
    ExperimentConfig cfg;
    cfg.engine = Engine::Mps;
    cfg.input_state = InputState::Two;
    cfg.pulse.shape = pulse::Shape::TopHat;
    cfg.pulse.t_p = 1.0;
    cfg.pulse.t_b = 2.0;
    auto res = run_mps_engine(cfg);
    out.push_back(make("mps_conservation_defect",
                       res.diagnostics.at("conservation_defect").get<double>(), 1e-3,
                       "max |n_TLS + <N> - 2| over steps"));
    out.push_back(make("mps_initial_photon_number",
                       std::abs(res.diagnostics.at("initial_photon_number").get<double>() - 2.0),
                       1e-6, "photon number of the prepared state"));
  }

  // 7. t_b = 0 indistinguishability of the alpha = 0 and alpha = 0.5 pipelines
  {
    auto f_out_for = [&](double alpha) {
      pulse::FrequencyGrid fg{30.0, 1024};
      const auto g1 = pulse::gaussian_spectral_amplitude(fg, 1.0, 4.0);
      const auto [f1, f2] = pulse::mixed_spectra(alpha, g1, g1);
      return scatter::scatter_two_photon(pulse::symmetrized_two_photon_spectrum(f1, f2), gamma);
    };
    const auto fa = f_out_for(0.0);
    const auto fb = f_out_for(0.5);
    const double diff = (fa.values - fb.values).cwiseAbs().maxCoeff();
    out.push_back(make("tb0_indistinguishability", diff, 1e-8,
                       "max |f_out(alpha=0) - f_out(alpha=0.5)| at t_b=0"));
  }

  // 8. quick cross-engine agreement (Gaussian |2>, t_b = 8)
  if (!quick) {
    ExperimentConfig cfg;
    cfg.engine = Engine::Both;
    cfg.input_state = InputState::Two;
    cfg.pulse.t_b = 8.0;
    cfg.grids.truncation_eps = 1e-4;
    auto a = run_mps_engine(cfg);
    auto b = run_scattering_engine(cfg);
    auto rep = compare_results(a, b);
    double worst = 0.0;
    std::string names;
    for (const auto& e : rep.entries) {
      if (e.observable == "n_tls" || e.observable == "n_t") {
        worst = std::max(worst, e.max_abs);
        names += e.observable + " ";
      }
    }
    out.push_back(make("cross_engine_quick", worst, 1e-2,
                       "max abs series difference over " + names + "(Gaussian |2>, t_b=8)"));
  }

  return out;
}

nlohmann::json validation_to_json(const std::vector<CheckResult>& checks) {
  nlohmann::json j;
  j["checks"] = nlohmann::json::array();
  bool all = true;
  for (const auto& c : checks) {
    all = all && c.pass;
    j["checks"].push_back({{"name", c.name},
                           {"pass", c.pass},
                           {"value", c.value},
                           {"tolerance", c.tolerance},
                           {"detail", c.detail}});
  }
  j["pass"] = all;
  return j;
}

}  // namespace biphoton::runner
