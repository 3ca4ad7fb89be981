#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "biphoton/evolution.hpp"
#include "biphoton/observables.hpp"
#include "biphoton/pulse.hpp"
#include "biphoton/scattering.hpp"
#include "biphoton/spectrum.hpp"

namespace biphoton::runner {

using nlohmann::json;

/// Invalid configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// A numerical contract was violated (CLI exit code 2).
struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Engine { Mps, Scattering, Both };

enum class InputState { OneOne, Two, Alpha };

struct GridConfig {
  double dt = 0.01;            // MPS bin width
  double t_end = 0.0;          // 0 -> derived from the pulse parameters
  double omega_max = 30.0;     // frequency window half-width
  int n_omega = 1024;
  double scattering_dt = 0.02; // output time grid of the scattering engine
  int map_stride = 10;         // correlation-map subsampling, in MPS bins
  double truncation_eps = 1e-4;// envelope norm allowed outside the window
  int local_dim = 3;           // waveguide bin dimension d_b

  double resolved_t_end(const pulse::PulseParams& p) const;
};

struct OutputConfig {
  bool series = true;
  bool g2_map = false;
  bool g1_map = false;
  bool spectrum = false;
  bool envelope = false;
};

struct ExperimentConfig {
  std::string label = "run";
  Engine engine = Engine::Both;
  pulse::PulseParams pulse;
  InputState input_state = InputState::Two;
  double alpha = 0.5;  // only read when input_state == Alpha
  GridConfig grids;
  mps::EvolutionParams truncation;
  OutputConfig outputs;

  void validate() const;
  /// Effective mixing parameter (0 for one_one, 0.5 for two).
  double effective_alpha() const;

  static ExperimentConfig from_json(const json& j);
  json to_json() const;
  static ExperimentConfig load(const std::filesystem::path& path);
};

struct EngineResult {
  ObservableSeries series;
  std::optional<CorrelationMap> g2;
  std::optional<CorrelationMap> g1;
  /// Discretized input envelope (bin midpoints, values), MPS engine only.
  std::optional<std::pair<Eigen::VectorXd, Eigen::VectorXcd>> envelope;
  json diagnostics;
};

EngineResult run_mps_engine(const ExperimentConfig& cfg);
EngineResult run_scattering_engine(const ExperimentConfig& cfg);

/// Single-photon transmission through the scattering engine (linear, exact).
ObservableSeries scattering_single_photon(double sigma_t, double t_c, const GridConfig& grids,
                                          double gamma = 1.0);

/// Runs the configured engines, writes CSVs and a manifest per engine
/// directory, and returns the manifest paths.
std::vector<std::filesystem::path> run_experiment(const ExperimentConfig& cfg,
                                                  const std::filesystem::path& out_dir);

struct ComparisonTolerances {
  double series_max_abs = 1e-2;   // n_tls, n_t, n_in
  double map_rel_at_max = 5e-2;   // G1/G2 and n_tt
};

struct ComparisonEntry {
  std::string observable;
  double max_abs = 0.0;
  double l2 = 0.0;
  double rel_at_max = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;
  bool pass = true;
  json to_json() const;
};

ComparisonReport compare_methods(const std::filesystem::path& manifest_a,
                                 const std::filesystem::path& manifest_b,
                                 const ComparisonTolerances& tol = {});
/// In-memory comparison of two engine results over their common window.
ComparisonReport compare_results(const EngineResult& a, const EngineResult& b,
                                 const ComparisonTolerances& tol = {});

struct SweepConfig {
  pulse::PulseParams pulse;  // sigma_t and t_c are used; shape must be Gaussian
  std::vector<double> t_b_values;
  std::vector<double> alpha_values;
  GridConfig grids;
  double gamma = 1.0;

  static SweepConfig from_json(const json& j);
  static SweepConfig defaults();
};

struct SweepCell {
  double t_b = 0.0;
  double alpha = 0.0;
  double max_pop = 0.0;
  bool failed = false;
  std::string error;
};

/// Maximum TLS population per (t_b, alpha) cell, scattering engine only.
/// Failed cells are marked and the sweep continues.
std::vector<SweepCell> sweep_max_population(const SweepConfig& cfg, int threads = 0);

void write_sweep_csv(const std::filesystem::path& path, const std::vector<SweepCell>& cells);

/// Linear interpolation of (x, y) samples at query points; used by the
/// comparison harness after selecting the coarser grid.
Eigen::VectorXd interp_linear(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                              const Eigen::VectorXd& xq);

}  // namespace biphoton::runner
