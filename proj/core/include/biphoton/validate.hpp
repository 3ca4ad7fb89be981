#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace biphoton::runner {

/// One entry of the self-check suite.
struct CheckResult {
  std::string name;
  bool pass = false;
  double value = 0.0;      // measured defect / quantity
  double tolerance = 0.0;  // pass threshold on `value`
  std::string detail;
};

/// Runs the full oracle suite: spontaneous decay, single-photon amplitude
/// ODE, S-matrix unitarity with grid doubling, number conservation in both
/// engines, t_b = 0 indistinguishability, and a quick cross-engine
/// comparison.  Failures are report entries, not exceptions.
std::vector<CheckResult> run_validation_suite(bool quick = false);

nlohmann::json validation_to_json(const std::vector<CheckResult>& checks);

}  // namespace biphoton::runner
