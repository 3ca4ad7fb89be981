#pragma once

#include "biphoton/mps.hpp"
#include "biphoton/observables.hpp"

namespace biphoton::mps {

struct EvolutionParams {
  double gamma = 1.0;
  double svd_cutoff = 1e-10;  // relative discarded squared weight per split
  int max_bond = 16;
};

/// Exact unitary exp(-i sqrt(gamma) (sigma+ dB + h.c.)) on the joint
/// (TLS x bin) space, basis index s*d_b + n.  Block diagonal in total
/// excitation number; each two-dimensional block is a closed-form rotation.
Eigen::MatrixXcd interaction_step_unitary(double gamma, double dt, int d_b = 3);

struct EvolveRecord {
  ObservableSeries series;
  double discarded_weight = 0.0;      // cumulative relative truncation weight
  double conservation_defect = 0.0;   // max |n_TLS + <N> - N_total| over steps
  double initial_photon_number = 0.0;
  int max_bond_reached = 1;
};

/// Sweeps the interaction unitary over all bins, swapping the TLS past each
/// one.  On return the state holds the fully scattered chain (TLS rightmost,
/// OC on the TLS).  Fluxes are reported at bin midpoints.
EvolveRecord evolve(TimeBinMPS& state, const EvolutionParams& p, double t0 = 0.0);

}  // namespace biphoton::mps
