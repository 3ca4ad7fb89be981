// Command-line driver for the two-photon waveguide scattering simulator.
//
// Subcommands: run, preset, compare, sweep, validate.
// Exit codes: 0 success, 1 config error, 2 numerical-contract failure,
// 3 comparison failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "biphoton/experiment.hpp"
#include "biphoton/validate.hpp"

namespace fs = std::filesystem;
using namespace biphoton;

namespace {

struct GlobalFlags {
  std::string out_dir = "out";
  int threads = 0;
  double dt = 0.0;          // 0 -> keep config value
  int grid_points = 0;      // 0 -> keep config value
};

void apply_overrides(runner::ExperimentConfig& cfg, const GlobalFlags& g) {
  if (g.dt > 0.0) cfg.grids.dt = g.dt;
  if (g.grid_points > 0) cfg.grids.n_omega = g.grid_points;
  cfg.validate();
}

fs::path preset_path(const std::string& name, const std::string& preset_dir) {
  fs::path dir = preset_dir.empty() ? fs::path(BIPHOTON_PRESET_DIR) : fs::path(preset_dir);
  fs::path p = dir / (name + ".json");
  if (!fs::exists(p))
    throw runner::ConfigError("unknown preset '" + name + "' (looked for " + p.string() + ")");
  return p;
}

int do_run(const runner::ExperimentConfig& cfg, const GlobalFlags& g) {
  const auto manifests = runner::run_experiment(cfg, g.out_dir);
  for (const auto& m : manifests) std::cout << m.string() << '\n';
  if (cfg.engine == runner::Engine::Both) {
    std::ifstream f(fs::path(g.out_dir) / cfg.label / "comparison.json");
    nlohmann::json rep;
    f >> rep;
    if (!rep.at("pass").get<bool>()) {
      std::cerr << "comparison FAILED:\n" << rep.dump(2) << '\n';
      return 3;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon pulse scattering on a chiral waveguide TLS"};
  app.require_subcommand(1);

  GlobalFlags g;
  app.add_option("--out-dir", g.out_dir, "output directory (default: out)");
  app.add_option("--threads", g.threads, "worker threads (0 = hardware)");
  app.add_option("--dt", g.dt, "override the MPS time-bin width");
  app.add_option("--grid-points", g.grid_points, "override the frequency grid size");

  std::string config_path, preset_name, preset_dir, manifest_a, manifest_b, sweep_path;
  bool quick = false;

  auto* run_cmd = app.add_subcommand("run", "run an experiment from a JSON config");
  run_cmd->add_option("config", config_path, "experiment config file")->required();

  auto* preset_cmd = app.add_subcommand("preset", "run a named preset");
  preset_cmd->add_option("name", preset_name, "preset name (e.g. fig4f)")->required();
  preset_cmd->add_option("--preset-dir", preset_dir, "directory holding preset JSON files");

  auto* compare_cmd = app.add_subcommand("compare", "compare two run manifests");
  compare_cmd->add_option("manifest_a", manifest_a)->required();
  compare_cmd->add_option("manifest_b", manifest_b)->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "max-population sweep over (t_b, alpha)");
  sweep_cmd->add_option("config", sweep_path, "sweep config file (omit for defaults)");

  auto* validate_cmd = app.add_subcommand("validate", "run the self-check suite");
  validate_cmd->add_flag("--quick", quick, "skip the slower refinement checks");

  // allow the global flags to appear after the subcommand as well
  for (auto* sc : {run_cmd, preset_cmd, compare_cmd, sweep_cmd, validate_cmd})
    sc->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      auto cfg = runner::ExperimentConfig::load(config_path);
      apply_overrides(cfg, g);
      return do_run(cfg, g);
    }
    if (preset_cmd->parsed()) {
      const fs::path path = preset_path(preset_name, preset_dir);
      std::ifstream f(path);
      nlohmann::json j;
      f >> j;
      if (j.value("sweep", false)) {
        auto cfg = runner::SweepConfig::from_json(j);
        auto cells = runner::sweep_max_population(cfg, g.threads);
        fs::create_directories(g.out_dir);
        const fs::path out = fs::path(g.out_dir) / (preset_name + "_sweep.csv");
        runner::write_sweep_csv(out, cells);
        std::cout << out.string() << '\n';
        return 0;
      }
      auto cfg = runner::ExperimentConfig::from_json(j);
      apply_overrides(cfg, g);
      return do_run(cfg, g);
    }
    if (compare_cmd->parsed()) {
      auto rep = runner::compare_methods(manifest_a, manifest_b);
      std::cout << rep.to_json().dump(2) << '\n';
      return rep.pass ? 0 : 3;
    }
    if (sweep_cmd->parsed()) {
      runner::SweepConfig cfg;
      if (sweep_path.empty()) {
        cfg = runner::SweepConfig::defaults();
      } else {
        std::ifstream f(sweep_path);
        if (!f) throw runner::ConfigError("cannot open sweep config: " + sweep_path);
        nlohmann::json j;
        f >> j;
        cfg = runner::SweepConfig::from_json(j);
      }
      auto cells = runner::sweep_max_population(cfg, g.threads);
      fs::create_directories(g.out_dir);
      const fs::path out = fs::path(g.out_dir) / "sweep.csv";
      runner::write_sweep_csv(out, cells);
      std::cout << out.string() << '\n';
      for (const auto& c : cells)
        if (c.failed) {
          std::cerr << "sweep cell (t_b=" << c.t_b << ", alpha=" << c.alpha
                    << ") failed: " << c.error << '\n';
          return 2;
        }
      return 0;
    }
    if (validate_cmd->parsed()) {
      auto checks = runner::run_validation_suite(quick);
      auto j = runner::validation_to_json(checks);
      std::cout << j.dump(2) << '\n';
      return j.at("pass").get<bool>() ? 0 : 2;
    }
  } catch (const runner::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const runner::NumericsError& e) {
    std::cerr << "numerical contract violated: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
