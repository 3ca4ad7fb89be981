#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "biphoton/pulse.hpp"

namespace biphoton::mps {

using Complex = std::complex<double>;

/// Rank-3 MPS site tensor stored as one (left x right) matrix per physical
/// index.
struct SiteTensor {
  std::vector<Eigen::MatrixXcd> blocks;

  int phys() const { return static_cast<int>(blocks.size()); }
  int left() const { return static_cast<int>(blocks[0].rows()); }
  int right() const { return static_cast<int>(blocks[0].cols()); }
};

/// Local operators on a truncated bosonic bin (dimension d).
Eigen::MatrixXcd bin_annihilation(int d);
Eigen::MatrixXcd bin_number(int d);
Eigen::MatrixXcd bin_pair_number(int d);  // n(n-1)

/// Joint waveguide + TLS state in the time-bin basis.  Chain layout: the TLS
/// tensor starts at position 0 with all input bins to its right; evolution
/// swaps it past each interacted bin, so scattered bins accumulate on the
/// left.  The orthogonality center is tracked explicitly.
class TimeBinMPS {
 public:
  std::vector<SiteTensor> sites;
  int oc = 0;
  int tls_pos = 0;
  double dt = 0.0;
  int d_b = 3;

  int size() const { return static_cast<int>(sites.size()); }
  int num_bins() const { return size() - 1; }
  /// Chain position of time bin k (bins keep their temporal order; the TLS
  /// sits between scattered and incoming bins).
  int bin_site(int k) const { return k < tls_pos ? k : k + 1; }

  double norm_sq() const;
  void move_oc_right();
  void move_oc_left();
  void move_oc_to(int site);

  /// <op> at a single site; moves the OC there.
  Complex expect_local(int site, const Eigen::MatrixXcd& op);

  /// Max deviation from isometry among sites left (right) of the OC.
  double canonical_defect() const;

  double tls_population();
  double flux(int bin);      // <n>/dt at a bin
  double pair_flux(int bin); // <n(n-1)>/dt^2 at a bin
  /// Total photon number sum_k <n_k>.
  double photon_number();
};

TimeBinMPS build_vacuum(int m, double dt, int d_b = 3);
TimeBinMPS build_single_photon_mps(const pulse::EnvelopeGrid& f, int d_b = 3);
TimeBinMPS build_two_photon_mps(const pulse::EnvelopeGrid& f, int d_b = 3);

/// |1>|1> product of two disjoint single-photon pulses embedded in a chain of
/// m bins starting at t0.
TimeBinMPS concat_product_pulses(const pulse::EnvelopeGrid& f1, const pulse::EnvelopeGrid& f2,
                                 double t0, int m, int d_b = 3);

/// |1>|1> state of two single-photon wave packets that may overlap in time:
/// the properly symmetrized two-photon state ~ a1^dag a2^dag |0> with
/// a_i^dag = sum_k f_i(k) b_k^dag, normalized by 1/sqrt(1 + |<f1,f2>|^2).
/// Bond dimension 4; reduces to the product state for disjoint supports.
TimeBinMPS build_symmetrized_pair_mps(const pulse::EnvelopeGrid& f1,
                                      const pulse::EnvelopeGrid& f2, int d_b = 3);

}  // namespace biphoton::mps
