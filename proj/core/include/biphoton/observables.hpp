#pragma once

#include <Eigen/Dense>

namespace biphoton {

/// Time series of the four single-time observables, on a shared grid of bin
/// midpoints.
struct ObservableSeries {
  Eigen::VectorXd t;
  Eigen::VectorXd n_in;
  Eigen::VectorXd n_tls;
  Eigen::VectorXd n_t;
  Eigen::VectorXd n_tt;
};

/// Two-time correlation data stored over ordered pairs of absolute times:
/// values(i, j) = G(t_i, t_j).  The (t, tau) view used by the CSV writers is
/// tau = t_j - t_i.  For G2 the values are real nonnegative; G2(t, 0) = n_TT.
struct CorrelationMap {
  Eigen::VectorXd t;
  Eigen::MatrixXcd values;
  bool second_order = true;

  double at_max_abs() const { return values.cwiseAbs().maxCoeff(); }
};

}  // namespace biphoton
