#include "biphoton/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <thread>

#include "biphoton/correlations.hpp"
#include "biphoton/csv_io.hpp"

namespace biphoton::runner {

namespace fs = std::filesystem;

double GridConfig::resolved_t_end(const pulse::PulseParams& p) const {
  if (t_end > 0.0) return t_end;
  const double pulse_end = (p.shape == pulse::Shape::TopHat) ? p.t_b + p.t_p : p.t_c + p.t_b;
  return pulse_end + 15.0;
}

double ExperimentConfig::effective_alpha() const {
  switch (input_state) {
    case InputState::OneOne: return 0.0;
    case InputState::Two: return 0.5;
    case InputState::Alpha: return alpha;
  }
  return alpha;
}

void ExperimentConfig::validate() const {
  try {
    pulse.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("pulse: ") + e.what());
  }
  const bool uses_scattering = engine != Engine::Mps;
  const bool uses_mps = engine != Engine::Scattering;
  if (uses_scattering && pulse.shape == pulse::Shape::TopHat)
    throw ConfigError("pulse.shape: top-hat pulses are MPS-only (slow spectral convergence)");
  if (input_state == InputState::Alpha) {
    if (pulse.shape != pulse::Shape::Gaussian)
      throw ConfigError("input_state: alpha mixing requires shape=gaussian");
    if (engine != Engine::Scattering)
      throw ConfigError(
          "input_state: intermediate alpha requires engine=scattering "
          "(MPS realizes only alpha in {0, 0.5})");
    if (alpha < 0.0 || alpha > 0.5) throw ConfigError("input_state.alpha: must lie in [0, 0.5]");
  }
  if (uses_mps && input_state == InputState::OneOne && pulse.shape == pulse::Shape::TopHat &&
      pulse.t_b < pulse.t_p)
    throw ConfigError("pulse.t_b: one_one top-hat envelopes would overlap (t_b < t_p)");
  if (grids.dt <= 0.0) throw ConfigError("grids.dt: must be > 0");
  if (grids.map_stride < 1) throw ConfigError("grids.map_stride: must be >= 1");
  if (grids.local_dim < 3) throw ConfigError("grids.local_dim: need at least occupancies 0,1,2");
  if (truncation.gamma <= 0.0) throw ConfigError("truncation.gamma: must be > 0");
  if (truncation.svd_cutoff < 0.0) throw ConfigError("truncation.svd_cutoff: must be >= 0");
  if (truncation.max_bond < 2) throw ConfigError("truncation.max_bond: must be >= 2");
  if (uses_mps && truncation.gamma * grids.dt > 0.1)
    throw ConfigError("grids.dt: collision step too coarse (need gamma*dt <= 0.1)");
  if (uses_scattering) {
    if (grids.n_omega < 2 || grids.omega_max <= 0.0)
      throw ConfigError("grids: invalid frequency window");
    const double dw = 2.0 * grids.omega_max / (grids.n_omega - 1);
    if (dw > truncation.gamma / 10.0)
      throw ConfigError("grids.n_omega: frequency grid too coarse (need domega <= gamma/10)");
    if (grids.scattering_dt <= 0.0 || grids.scattering_dt > M_PI / grids.omega_max)
      throw ConfigError("grids.scattering_dt: not Nyquist-compatible with omega_max");
  }
}

namespace {

std::string engine_name(Engine e) {
  switch (e) {
    case Engine::Mps: return "mps";
    case Engine::Scattering: return "scattering";
    case Engine::Both: return "both";
  }
  return "both";
}

Engine engine_from(const std::string& s) {
  if (s == "mps") return Engine::Mps;
  if (s == "scattering") return Engine::Scattering;
  if (s == "both") return Engine::Both;
  throw ConfigError("engine: expected mps | scattering | both, got '" + s + "'");
}

pulse::Shape shape_from(const std::string& s) {
  if (s == "tophat") return pulse::Shape::TopHat;
  if (s == "gaussian") return pulse::Shape::Gaussian;
  throw ConfigError("pulse.shape: expected tophat | gaussian, got '" + s + "'");
}

template <typename T>
T field(const json& j, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    throw ConfigError(key + ": invalid value");
  }
}

CorrelationMap subsample_map(const CorrelationMap& m, int stride) {
  if (stride <= 1) return m;
  const int n = static_cast<int>(m.t.size());
  std::vector<int> idx;
  for (int i = 0; i < n; i += stride) idx.push_back(i);
  CorrelationMap out;
  out.second_order = m.second_order;
  out.t.resize(idx.size());
  out.values.resize(idx.size(), idx.size());
  for (size_t a = 0; a < idx.size(); ++a) {
    out.t[a] = m.t[idx[a]];
    for (size_t b = 0; b < idx.size(); ++b) out.values(a, b) = m.values(idx[a], idx[b]);
  }
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  c.label = field<std::string>(j, "label", field<std::string>(j, "seed_label", "run"));
  c.engine = engine_from(field<std::string>(j, "engine", "both"));

  if (j.contains("pulse")) {
    const json& p = j.at("pulse");
    c.pulse.shape = shape_from(field<std::string>(p, "shape", "gaussian"));
    c.pulse.t_p = field<double>(p, "t_p", 1.0);
    c.pulse.sigma_t = field<double>(p, "sigma_t", 1.0);
    c.pulse.t_c = field<double>(p, "t_c", 4.0);
    c.pulse.t_b = field<double>(p, "t_b", 8.0);
  }
  if (j.contains("input_state")) {
    const json& s = j.at("input_state");
    if (s.is_number()) {
      c.input_state = InputState::Alpha;
      c.alpha = s.get<double>();
    } else {
      const auto name = s.get<std::string>();
      if (name == "one_one")
        c.input_state = InputState::OneOne;
      else if (name == "two")
        c.input_state = InputState::Two;
      else
        throw ConfigError("input_state: expected one_one | two | alpha value, got '" + name +
                          "'");
    }
  }
  if (j.contains("grids")) {
    const json& g = j.at("grids");
    c.grids.dt = field<double>(g, "dt", c.grids.dt);
    c.grids.t_end = field<double>(g, "t_end", c.grids.t_end);
    c.grids.omega_max = field<double>(g, "omega_max", c.grids.omega_max);
    c.grids.n_omega = field<int>(g, "n_omega", c.grids.n_omega);
    c.grids.scattering_dt = field<double>(g, "scattering_dt", c.grids.scattering_dt);
    c.grids.map_stride = field<int>(g, "map_stride", c.grids.map_stride);
    c.grids.truncation_eps = field<double>(g, "truncation_eps", c.grids.truncation_eps);
    c.grids.local_dim = field<int>(g, "local_dim", c.grids.local_dim);
  }
  if (j.contains("truncation")) {
    const json& t = j.at("truncation");
    c.truncation.gamma = field<double>(t, "gamma", c.truncation.gamma);
    c.truncation.svd_cutoff = field<double>(t, "svd_cutoff", c.truncation.svd_cutoff);
    c.truncation.max_bond = field<int>(t, "max_bond", c.truncation.max_bond);
  }
  if (j.contains("outputs")) {
    const json& o = j.at("outputs");
    c.outputs.series = field<bool>(o, "series", c.outputs.series);
    c.outputs.g2_map = field<bool>(o, "g2_map", c.outputs.g2_map);
    c.outputs.g1_map = field<bool>(o, "g1_map", c.outputs.g1_map);
    c.outputs.spectrum = field<bool>(o, "spectrum", c.outputs.spectrum);
    c.outputs.envelope = field<bool>(o, "envelope", c.outputs.envelope);
  }
  c.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  j["schema_version"] = 1;
  j["label"] = label;
  j["engine"] = engine_name(engine);
  j["pulse"] = {{"shape", pulse.shape == pulse::Shape::TopHat ? "tophat" : "gaussian"},
                {"t_p", pulse.t_p},
                {"sigma_t", pulse.sigma_t},
                {"t_c", pulse.t_c},
                {"t_b", pulse.t_b}};
  if (input_state == InputState::Alpha)
    j["input_state"] = alpha;
  else
    j["input_state"] = input_state == InputState::OneOne ? "one_one" : "two";
  j["grids"] = {{"dt", grids.dt},
                {"t_end", grids.t_end},
                {"omega_max", grids.omega_max},
                {"n_omega", grids.n_omega},
                {"scattering_dt", grids.scattering_dt},
                {"map_stride", grids.map_stride},
                {"truncation_eps", grids.truncation_eps},
                {"local_dim", grids.local_dim}};
  j["truncation"] = {{"gamma", truncation.gamma},
                     {"svd_cutoff", truncation.svd_cutoff},
                     {"max_bond", truncation.max_bond}};
  j["outputs"] = {{"series", outputs.series},
                  {"g2_map", outputs.g2_map},
                  {"g1_map", outputs.g1_map},
                  {"spectrum", outputs.spectrum},
                  {"envelope", outputs.envelope}};
  return j;
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path.string());
  json j;
  try {
    f >> j;
  } catch (const std::exception& e) {
    throw ConfigError("config parse error in " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

EngineResult run_mps_engine(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.engine == Engine::Scattering)
    throw ConfigError("run_mps_engine called with engine=scattering");
  if (cfg.input_state == InputState::Alpha)
    throw ConfigError("MPS engine cannot realize intermediate alpha");

  const auto& p = cfg.pulse;
  const double dt = cfg.grids.dt;
  const double t_end = cfg.grids.resolved_t_end(p);
  const int m = static_cast<int>(std::llround(t_end / dt));
  const double eps = cfg.grids.truncation_eps;
  const int d_b = cfg.grids.local_dim;

  mps::TimeBinMPS psi;
  std::vector<pulse::EnvelopeGrid> env_grids;
  if (cfg.input_state == InputState::Two) {
    const auto env = (p.shape == pulse::Shape::TopHat) ? pulse::tophat_two_photon(p)
                                                       : pulse::gaussian_two_peak(p);
    auto grid = pulse::discretize_envelope(env, dt, 0.0, t_end, eps);
    psi = mps::build_two_photon_mps(grid, d_b);
    env_grids.push_back(std::move(grid));
  } else if (p.shape == pulse::Shape::TopHat) {
    auto [e1, e2] = pulse::tophat_single_envelopes(p);
    const double b1 = std::floor(e1.support_lo / dt) * dt;
    const double b2 = std::floor(e2.support_lo / dt + 0.5) * dt;
    auto g1 = pulse::discretize_envelope(e1, dt, b1, std::ceil(e1.support_hi / dt) * dt, eps);
    auto g2 = pulse::discretize_envelope(e2, dt, b2, std::ceil(e2.support_hi / dt) * dt, eps);
    psi = mps::concat_product_pulses(g1, g2, 0.0, m, d_b);
    env_grids.push_back(std::move(g1));
    env_grids.push_back(std::move(g2));
  } else {
    // overlapping Gaussians: exact symmetrized |1>|1> over the full window
    auto g1 = pulse::discretize_envelope(pulse::gaussian_single(p.t_c, p.sigma_t), dt, 0.0,
                                         t_end, eps);
    auto g2 = pulse::discretize_envelope(pulse::gaussian_single(p.t_c + p.t_b, p.sigma_t), dt,
                                         0.0, t_end, eps);
    psi = mps::build_symmetrized_pair_mps(g1, g2, d_b);
    env_grids.push_back(std::move(g1));
    env_grids.push_back(std::move(g2));
  }

  mps::EvolutionParams ep = cfg.truncation;
  auto rec = mps::evolve(psi, ep, 0.0);

  EngineResult res;
  res.series = std::move(rec.series);
  if (cfg.outputs.g2_map)
    res.g2 = mps::two_time_correlation(psi, true, cfg.grids.map_stride, 0.0);
  if (cfg.outputs.g1_map)
    res.g1 = mps::two_time_correlation(psi, false, cfg.grids.map_stride, 0.0);

  res.diagnostics = {{"engine", "mps"},
                     {"gamma", ep.gamma},
                     {"bins", m},
                     {"dt", dt},
                     {"local_dim", d_b},
                     {"discarded_weight", rec.discarded_weight},
                     {"conservation_defect", rec.conservation_defect},
                     {"initial_photon_number", rec.initial_photon_number},
                     {"max_bond_reached", rec.max_bond_reached}};
  if (cfg.outputs.envelope) {
    int total = 0;
    for (const auto& g : env_grids) total += g.size();
    Eigen::VectorXd tvals(total);
    Eigen::VectorXcd fvals(total);
    int pos = 0;
    for (const auto& g : env_grids)
      for (int k = 0; k < g.size(); ++k, ++pos) {
        tvals[pos] = g.bin_mid(k);
        fvals[pos] = g.values[k];
      }
    res.envelope = std::make_pair(std::move(tvals), std::move(fvals));
  }
  return res;
}

EngineResult run_scattering_engine(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.engine == Engine::Mps)
    throw ConfigError("run_scattering_engine called with engine=mps");
  const auto& p = cfg.pulse;
  const double gamma = cfg.truncation.gamma;
  const double a = cfg.effective_alpha();
  const double t_end = cfg.grids.resolved_t_end(p);

  pulse::FrequencyGrid fg{cfg.grids.omega_max, cfg.grids.n_omega};
  const auto g1 = pulse::gaussian_spectral_amplitude(fg, p.sigma_t, p.t_c);
  const auto g2 = pulse::gaussian_spectral_amplitude(fg, p.sigma_t, p.t_c + p.t_b);
  const auto [f1, f2] = pulse::mixed_spectra(a, g1, g2);
  const auto f_in = pulse::symmetrized_two_photon_spectrum(f1, f2);

  pulse::TwoPhotonSpectrum f_out;
  scatter::TimeGrid tg{0.0, cfg.grids.scattering_dt,
                       static_cast<int>(std::llround(t_end / cfg.grids.scattering_dt)) + 1};
  scatter::TwoPhotonAmplitude phi_in, phi_out;
  try {
    f_out = scatter::scatter_two_photon(f_in, gamma);
    phi_in = scatter::spectrum_to_time_amplitude(f_in, tg);
    phi_out = scatter::spectrum_to_time_amplitude(f_out, tg);
  } catch (const std::runtime_error& e) {
    throw NumericsError(e.what());
  }

  EngineResult res;
  res.series.t.resize(tg.n);
  for (int i = 0; i < tg.n; ++i) res.series.t[i] = tg.t(i);
  res.series.n_in = scatter::transmitted_flux(phi_in);
  res.series.n_t = scatter::transmitted_flux(phi_out);
  res.series.n_tt.resize(tg.n);
  for (int i = 0; i < tg.n; ++i) res.series.n_tt[i] = 2.0 * std::norm(phi_out.values(i, i));
  try {
    res.series.n_tls =
        scatter::tls_population_by_continuity(res.series.n_in, res.series.n_t, tg.dt);
  } catch (const std::runtime_error& e) {
    throw NumericsError(e.what());
  }

  const int stride =
      std::max(1, static_cast<int>(std::llround(cfg.grids.map_stride * cfg.grids.dt /
                                                cfg.grids.scattering_dt)));
  if (cfg.outputs.g2_map) res.g2 = subsample_map(scatter::g2_map(phi_out), stride);
  if (cfg.outputs.g1_map) res.g1 = subsample_map(scatter::g1_map(phi_out), stride);

  res.diagnostics = {{"engine", "scattering"},
                     {"gamma", gamma},
                     {"alpha", a},
                     {"n_omega", fg.n},
                     {"domega", fg.domega()},
                     {"unitarity_defect", std::abs(std::sqrt(f_out.norm_sq()) - 1.0)},
                     {"photons_in", res.series.n_in.sum() * tg.dt},
                     {"photons_out", res.series.n_t.sum() * tg.dt}};
  return res;
}

ObservableSeries scattering_single_photon(double sigma_t, double t_c, const GridConfig& grids,
                                          double gamma) {
  pulse::FrequencyGrid fg{grids.omega_max, grids.n_omega};
  auto g = pulse::gaussian_spectral_amplitude(fg, sigma_t, t_c);
  const double nrm = std::sqrt(g.norm_sq());
  g.values /= nrm;

  pulse::SpectralAmplitude gt = g;
  for (int k = 0; k < fg.n; ++k) gt.values[k] *= scatter::transmission_coefficient(fg.omega(k), gamma);

  const double t_end = grids.t_end > 0.0 ? grids.t_end : t_c + 15.0;
  scatter::TimeGrid tg{0.0, grids.scattering_dt,
                       static_cast<int>(std::llround(t_end / grids.scattering_dt)) + 1};
  const auto in_t = scatter::spectrum_to_time_1d(g, tg);
  const auto out_t = scatter::spectrum_to_time_1d(gt, tg);

  ObservableSeries s;
  s.t.resize(tg.n);
  for (int i = 0; i < tg.n; ++i) s.t[i] = tg.t(i);
  s.n_in = in_t.cwiseAbs2();
  s.n_t = out_t.cwiseAbs2();
  s.n_tt = Eigen::VectorXd::Zero(tg.n);
  s.n_tls = scatter::tls_population_by_continuity(s.n_in, s.n_t, tg.dt);
  return s;
}

namespace {

fs::path write_engine_output(const ExperimentConfig& cfg, Engine which, const EngineResult& res,
                             const fs::path& dir, double wall_s) {
  fs::create_directories(dir);
  json manifest;
  manifest["schema_version"] = 1;
  manifest["config"] = cfg.to_json();
  manifest["engine"] = engine_name(which);
  manifest["diagnostics"] = res.diagnostics;
  manifest["wall_time_s"] = wall_s;
  json files = json::object();
  if (cfg.outputs.series) {
    io::write_series_csv((dir / "series.csv").string(), res.series);
    files["series"] = "series.csv";
  }
  if (res.g2) {
    io::write_map_csv((dir / "g2_map.csv").string(), *res.g2);
    files["g2_map"] = "g2_map.csv";
  }
  if (res.g1) {
    io::write_map_csv((dir / "g1_map.csv").string(), *res.g1);
    files["g1_map"] = "g1_map.csv";
  }
  if (res.envelope) {
    io::write_envelope_csv((dir / "envelope.csv").string(), res.envelope->first,
                           res.envelope->second);
    files["envelope"] = "envelope.csv";
  }
  manifest["files"] = files;
  std::ofstream mf(dir / "manifest.json");
  mf << manifest.dump(2) << '\n';
  return dir / "manifest.json";
}

void dump_spectra(const ExperimentConfig& cfg, const fs::path& dir) {
  const auto& p = cfg.pulse;
  pulse::FrequencyGrid fg{cfg.grids.omega_max, cfg.grids.n_omega};
  const auto g1 = pulse::gaussian_spectral_amplitude(fg, p.sigma_t, p.t_c);
  const auto g2 = pulse::gaussian_spectral_amplitude(fg, p.sigma_t, p.t_c + p.t_b);
  const auto [f1, f2] = pulse::mixed_spectra(cfg.effective_alpha(), g1, g2);
  const auto f_in = pulse::symmetrized_two_photon_spectrum(f1, f2);
  const auto f_out = scatter::scatter_two_photon(f_in, cfg.truncation.gamma);
  io::write_spectral_csv((dir / "f1.csv").string(), f1);
  io::write_spectral_csv((dir / "f2.csv").string(), f2);
  io::write_two_photon_spectrum_csv((dir / "f_in.csv").string(), f_in);
  io::write_two_photon_spectrum_csv((dir / "f_out.csv").string(), f_out);
}

}  // namespace

std::vector<fs::path> run_experiment(const ExperimentConfig& cfg, const fs::path& out_dir) {
  cfg.validate();
  const fs::path base = out_dir / cfg.label;
  std::vector<fs::path> manifests;

  if (cfg.engine == Engine::Mps || cfg.engine == Engine::Both) {
    const auto start = std::chrono::steady_clock::now();
    auto res = run_mps_engine(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const fs::path dir = cfg.engine == Engine::Both ? base / "mps" : base;
    manifests.push_back(write_engine_output(cfg, Engine::Mps, res, dir, wall));
  }
  if (cfg.engine == Engine::Scattering || cfg.engine == Engine::Both) {
    const auto start = std::chrono::steady_clock::now();
    auto res = run_scattering_engine(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const fs::path dir = cfg.engine == Engine::Both ? base / "scattering" : base;
    manifests.push_back(write_engine_output(cfg, Engine::Scattering, res, dir, wall));
    if (cfg.outputs.spectrum) dump_spectra(cfg, dir);
  }
  if (cfg.engine == Engine::Both && manifests.size() == 2) {
    auto report = compare_methods(manifests[0], manifests[1]);
    std::ofstream cf(base / "comparison.json");
    cf << report.to_json().dump(2) << '\n';
  }
  return manifests;
}

Eigen::VectorXd interp_linear(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                              const Eigen::VectorXd& xq) {
  const int n = static_cast<int>(x.size());
  Eigen::VectorXd out(xq.size());
  for (int i = 0; i < xq.size(); ++i) {
    const double q = xq[i];
    if (q <= x[0]) {
      out[i] = y[0];
      continue;
    }
    if (q >= x[n - 1]) {
      out[i] = y[n - 1];
      continue;
    }
    int lo = static_cast<int>(std::lower_bound(x.data(), x.data() + n, q) - x.data());
    if (lo > 0) --lo;
    const double w = (q - x[lo]) / (x[lo + 1] - x[lo]);
    out[i] = (1.0 - w) * y[lo] + w * y[lo + 1];
  }
  return out;
}

namespace {

// Bilinear interpolation of |map| values onto (tq x tq).
Eigen::MatrixXd bilinear_abs(const CorrelationMap& m, const Eigen::VectorXd& tq) {
  const int n = static_cast<int>(m.t.size());
  const Eigen::MatrixXd vals = m.values.cwiseAbs();
  auto locate = [&](double q, int& lo, double& w) {
    if (q <= m.t[0]) {
      lo = 0;
      w = 0.0;
      return;
    }
    if (q >= m.t[n - 1]) {
      lo = n - 2;
      w = 1.0;
      return;
    }
    lo = static_cast<int>(std::lower_bound(m.t.data(), m.t.data() + n, q) - m.t.data());
    if (lo > 0) --lo;
    w = (q - m.t[lo]) / (m.t[lo + 1] - m.t[lo]);
  };
  Eigen::MatrixXd out(tq.size(), tq.size());
  for (int i = 0; i < tq.size(); ++i) {
    int li;
    double wi;
    locate(tq[i], li, wi);
    for (int j = 0; j < tq.size(); ++j) {
      int lj;
      double wj;
      locate(tq[j], lj, wj);
      out(i, j) = (1 - wi) * (1 - wj) * vals(li, lj) + wi * (1 - wj) * vals(li + 1, lj) +
                  (1 - wi) * wj * vals(li, lj + 1) + wi * wj * vals(li + 1, lj + 1);
    }
  }
  return out;
}

ComparisonEntry compare_series_pair(const std::string& name, const Eigen::VectorXd& ta,
                                    const Eigen::VectorXd& ya, const Eigen::VectorXd& tb,
                                    const Eigen::VectorXd& yb, double tol, bool relative) {
  // resample onto the coarser grid over the overlapping window
  const double lo = std::max(ta[0], tb[0]);
  const double hi = std::min(ta[ta.size() - 1], tb[tb.size() - 1]);
  if (hi <= lo) throw ConfigError("compare: disjoint time windows");
  const double step_a = (ta[ta.size() - 1] - ta[0]) / (ta.size() - 1);
  const double step_b = (tb[tb.size() - 1] - tb[0]) / (tb.size() - 1);
  const Eigen::VectorXd& tc = step_a >= step_b ? ta : tb;

  std::vector<double> pts;
  for (int i = 0; i < tc.size(); ++i)
    if (tc[i] >= lo && tc[i] <= hi) pts.push_back(tc[i]);
  Eigen::VectorXd tq = Eigen::Map<Eigen::VectorXd>(pts.data(), pts.size());
  const Eigen::VectorXd va = interp_linear(ta, ya, tq);
  const Eigen::VectorXd vb = interp_linear(tb, yb, tq);

  ComparisonEntry e;
  e.observable = name;
  e.max_abs = (va - vb).cwiseAbs().maxCoeff();
  e.l2 = std::sqrt((va - vb).squaredNorm() * (tq.size() > 1 ? tq[1] - tq[0] : 1.0));
  const double scale = std::max(va.cwiseAbs().maxCoeff(), vb.cwiseAbs().maxCoeff());
  e.rel_at_max = scale > 0.0 ? e.max_abs / scale : 0.0;
  e.tolerance = tol;
  e.pass = relative ? (e.rel_at_max <= tol || scale < 1e-12) : (e.max_abs <= tol);
  return e;
}

ComparisonEntry compare_map_pair(const std::string& name, const CorrelationMap& a,
                                 const CorrelationMap& b, double tol) {
  const double lo = std::max(a.t[0], b.t[0]);
  const double hi = std::min(a.t[a.t.size() - 1], b.t[b.t.size() - 1]);
  if (hi <= lo) throw ConfigError("compare: disjoint map windows");
  const bool a_coarser = a.t.size() <= b.t.size();
  const CorrelationMap& coarse = a_coarser ? a : b;
  std::vector<double> pts;
  for (int i = 0; i < coarse.t.size(); ++i)
    if (coarse.t[i] >= lo && coarse.t[i] <= hi) pts.push_back(coarse.t[i]);
  Eigen::VectorXd tq = Eigen::Map<Eigen::VectorXd>(pts.data(), pts.size());

  const Eigen::MatrixXd va = bilinear_abs(a, tq);
  const Eigen::MatrixXd vb = bilinear_abs(b, tq);
  ComparisonEntry e;
  e.observable = name;
  e.max_abs = (va - vb).cwiseAbs().maxCoeff();
  e.l2 = std::sqrt((va - vb).squaredNorm()) * (tq.size() > 1 ? tq[1] - tq[0] : 1.0);
  const double scale = std::max(va.maxCoeff(), vb.maxCoeff());
  e.rel_at_max = scale > 0.0 ? e.max_abs / scale : 0.0;
  e.tolerance = tol;
  e.pass = e.rel_at_max <= tol || scale < 1e-12;
  return e;
}

}  // namespace

ComparisonReport compare_results(const EngineResult& a, const EngineResult& b,
                                 const ComparisonTolerances& tol) {
  ComparisonReport rep;
  rep.entries.push_back(compare_series_pair("n_in", a.series.t, a.series.n_in, b.series.t,
                                            b.series.n_in, tol.series_max_abs, false));
  rep.entries.push_back(compare_series_pair("n_tls", a.series.t, a.series.n_tls, b.series.t,
                                            b.series.n_tls, tol.series_max_abs, false));
  rep.entries.push_back(compare_series_pair("n_t", a.series.t, a.series.n_t, b.series.t,
                                            b.series.n_t, tol.series_max_abs, false));
  rep.entries.push_back(compare_series_pair("n_tt", a.series.t, a.series.n_tt, b.series.t,
                                            b.series.n_tt, tol.map_rel_at_max, true));
  if (a.g2 && b.g2)
    rep.entries.push_back(compare_map_pair("g2", *a.g2, *b.g2, tol.map_rel_at_max));
  if (a.g1 && b.g1)
    rep.entries.push_back(compare_map_pair("g1", *a.g1, *b.g1, tol.map_rel_at_max));
  for (const auto& e : rep.entries) rep.pass = rep.pass && e.pass;
  return rep;
}

json ComparisonReport::to_json() const {
  json j;
  j["pass"] = pass;
  j["entries"] = json::array();
  for (const auto& e : entries)
    j["entries"].push_back({{"observable", e.observable},
                            {"max_abs", e.max_abs},
                            {"l2", e.l2},
                            {"rel_at_max", e.rel_at_max},
                            {"tolerance", e.tolerance},
                            {"pass", e.pass}});
  return j;
}

ComparisonReport compare_methods(const fs::path& manifest_a, const fs::path& manifest_b,
                                 const ComparisonTolerances& tol) {
  auto load = [](const fs::path& mpath) {
    std::ifstream f(mpath);
    if (!f) throw ConfigError("cannot open manifest: " + mpath.string());
    json m;
    f >> m;
    EngineResult res;
    const fs::path dir = mpath.parent_path();
    const json& files = m.at("files");
    if (!files.contains("series"))
      throw ConfigError("manifest " + mpath.string() + " has no series output");
    res.series = io::read_series_csv((dir / files.at("series").get<std::string>()).string());
    if (files.contains("g2_map"))
      res.g2 = io::read_map_csv((dir / files.at("g2_map").get<std::string>()).string(), true);
    if (files.contains("g1_map"))
      res.g1 = io::read_map_csv((dir / files.at("g1_map").get<std::string>()).string(), false);
    res.diagnostics = m.at("diagnostics");
    return res;
  };
  EngineResult a = load(manifest_a);
  EngineResult b = load(manifest_b);

  ComparisonReport rep = compare_results(a, b, tol);
  const double ga = a.diagnostics.value("gamma", 1.0);
  const double gb = b.diagnostics.value("gamma", 1.0);
  if (std::abs(ga - gb) > 1e-12) {
    ComparisonEntry e;
    e.observable = "gamma";
    e.max_abs = std::abs(ga - gb);
    e.tolerance = 0.0;
    e.pass = false;
    rep.entries.push_back(e);
    rep.pass = false;
  }
  return rep;
}

SweepConfig SweepConfig::defaults() {
  SweepConfig c;
  c.pulse.shape = pulse::Shape::Gaussian;
  c.pulse.sigma_t = 1.0;
  c.pulse.t_c = 4.0;
  for (double tb = 0.0; tb <= 20.0 + 1e-9; tb += 0.5) c.t_b_values.push_back(tb);
  c.alpha_values = {0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
  // Gaussian spectra (sigma_omega = 1/sigma_t) are negligible beyond ~10 gamma,
  // so the sweep uses a lighter grid than single runs; still domega <= gamma/10.
  c.grids.omega_max = 20.0;
  c.grids.n_omega = 512;
  c.grids.scattering_dt = 0.1;
  return c;
}

SweepConfig SweepConfig::from_json(const json& j) {
  SweepConfig c = defaults();
  if (j.contains("pulse")) {
    const json& p = j.at("pulse");
    if (field<std::string>(p, "shape", "gaussian") != "gaussian")
      throw ConfigError("sweep.pulse.shape: only gaussian pulses are supported");
    c.pulse.sigma_t = field<double>(p, "sigma_t", c.pulse.sigma_t);
    c.pulse.t_c = field<double>(p, "t_c", c.pulse.t_c);
  }
  if (j.contains("t_b")) {
    c.t_b_values.clear();
    const json& t = j.at("t_b");
    if (t.is_array()) {
      for (const auto& v : t) c.t_b_values.push_back(v.get<double>());
    } else {
      const double start = field<double>(t, "start", 0.0);
      const double stop = field<double>(t, "stop", 20.0);
      const double step = field<double>(t, "step", 0.5);
      if (step <= 0.0) throw ConfigError("sweep.t_b.step: must be > 0");
      for (double v = start; v <= stop + 1e-9; v += step) c.t_b_values.push_back(v);
    }
  }
  if (j.contains("alpha")) {
    c.alpha_values.clear();
    for (const auto& v : j.at("alpha")) c.alpha_values.push_back(v.get<double>());
  }
  if (j.contains("grids")) {
    const json& g = j.at("grids");
    c.grids.omega_max = field<double>(g, "omega_max", c.grids.omega_max);
    c.grids.n_omega = field<int>(g, "n_omega", c.grids.n_omega);
    c.grids.scattering_dt = field<double>(g, "scattering_dt", c.grids.scattering_dt);
  }
  c.gamma = field<double>(j, "gamma", 1.0);
  return c;
}

std::vector<SweepCell> sweep_max_population(const SweepConfig& cfg, int threads) {
  double tb_max = 0.0;
  for (double tb : cfg.t_b_values) tb_max = std::max(tb_max, tb);
  const double t_end = cfg.pulse.t_c + tb_max + 15.0;
  pulse::FrequencyGrid fg{cfg.grids.omega_max, cfg.grids.n_omega};
  scatter::TimeGrid tg{0.0, cfg.grids.scattering_dt,
                       static_cast<int>(std::llround(t_end / cfg.grids.scattering_dt)) + 1};
  // the transform matrix is shared by every cell
  const Eigen::MatrixXcd tmat = scatter::time_transform_matrix(fg, tg);
  const double dw = fg.domega();

  std::vector<SweepCell> cells;
  for (double tb : cfg.t_b_values)
    for (double al : cfg.alpha_values) cells.push_back({tb, al, 0.0, false, ""});

  // flux from the mixed time/frequency representation: n(t_i) = 2 domega
  // * ||row_i(M f)||^2, valid because the state is confined to the window
  auto flux_of = [&](const pulse::TwoPhotonSpectrum& f) -> Eigen::VectorXd {
    const Eigen::MatrixXcd b = tmat * f.values;
    return 2.0 * dw * b.cwiseAbs2().rowwise().sum();
  };

  auto run_cell = [&](SweepCell& cell) {
    try {
      pulse::PulseParams p = cfg.pulse;
      p.t_b = cell.t_b;
      p.alpha = cell.alpha;
      const auto s1 = pulse::gaussian_spectral_amplitude(fg, p.sigma_t, p.t_c);
      const auto s2 = pulse::gaussian_spectral_amplitude(fg, p.sigma_t, p.t_c + p.t_b);
      const auto [f1, f2] = pulse::mixed_spectra(cell.alpha, s1, s2);
      const auto f_in = pulse::symmetrized_two_photon_spectrum(f1, f2);
      const auto f_out = scatter::scatter_two_photon(f_in, cfg.gamma);
      const Eigen::VectorXd n_in = flux_of(f_in);
      const Eigen::VectorXd n_t = flux_of(f_out);
      double acc = 0.0, prev = 0.0, best = 0.0;
      for (int i = 0; i < tg.n; ++i) {
        const double d = n_in[i] - n_t[i];
        acc += 0.5 * (prev + d) * tg.dt;
        prev = d;
        best = std::max(best, acc);
      }
      cell.max_pop = best;
    } catch (const std::exception& e) {
      cell.failed = true;
      cell.error = e.what();
    }
  };

  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min<int>(nthreads, static_cast<int>(cells.size())));
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int w = 0; w < nthreads; ++w)
    pool.emplace_back([&]() {
      for (;;) {
        const size_t i = next.fetch_add(1);
        if (i >= cells.size()) return;
        run_cell(cells[i]);
      }
    });
  for (auto& th : pool) th.join();
  return cells;
}

void write_sweep_csv(const fs::path& path, const std::vector<SweepCell>& cells) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
  f.precision(12);
  f << "t_b,alpha,max_pop\n";
  for (const auto& c : cells) {
    f << c.t_b << ',' << c.alpha << ',';
    if (c.failed)
      f << "nan\n";
    else
      f << c.max_pop << '\n';
  }
}

}  // namespace biphoton::runner
