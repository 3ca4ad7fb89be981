#include "biphoton/correlations.hpp"

#include <stdexcept>

namespace biphoton::mps {

namespace {

Eigen::MatrixXcd apply_op(const SiteTensor& a, const Eigen::MatrixXcd& env,
                          const Eigen::MatrixXcd& op) {
  // env(bra, ket) between bonds left of the site; returns the same orientation
  // on the right bond with the operator inserted.
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(a.right(), a.right());
  for (int p = 0; p < a.phys(); ++p)
    for (int q = 0; q < a.phys(); ++q) {
      if (op(q, p) == 0.0) continue;
      out += op(q, p) * (a.blocks[q].adjoint() * env * a.blocks[p]);
    }
  return out;
}

Eigen::MatrixXcd propagate(const SiteTensor& a, const Eigen::MatrixXcd& env) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(a.right(), a.right());
  for (int p = 0; p < a.phys(); ++p) out += a.blocks[p].adjoint() * env * a.blocks[p];
  return out;
}

}  // namespace

CorrelationMap two_time_correlation(TimeBinMPS& state, bool second_order, int stride,
                                    double t0) {
  const int m = state.num_bins();
  if (state.tls_pos != m)
    throw std::logic_error("two_time_correlation: chain is not fully scattered");
  if (stride < 1) throw std::invalid_argument("stride must be >= 1");
  state.move_oc_to(m);  // bins 0..m-1 left-canonical, OC on the TLS

  const int d = state.d_b;
  const double dt = state.dt;
  const Eigen::MatrixXcd num = bin_number(d);
  const Eigen::MatrixXcd nn1 = bin_pair_number(d);
  const Eigen::MatrixXcd bop = bin_annihilation(d);
  const Eigen::MatrixXcd bdag = bop.adjoint();
  const Eigen::MatrixXcd op1 = second_order ? num : bdag;
  const Eigen::MatrixXcd op2 = second_order ? num : bop;

  // right environments of <psi|psi> over bonds right of each bin
  std::vector<Eigen::MatrixXcd> renv(m + 1);
  {
    const SiteTensor& tls = state.sites[m];
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(tls.left(), tls.left());
    for (const auto& b : tls.blocks) r += b * b.adjoint();
    renv[m] = r;  // bond between last bin and the TLS
    for (int j = m - 1; j >= 1; --j) {
      const SiteTensor& a = state.sites[j];
      Eigen::MatrixXcd rr = Eigen::MatrixXcd::Zero(a.left(), a.left());
      for (const auto& b : a.blocks) rr += b * renv[j + 1] * b.adjoint();
      renv[j] = rr;  // renv[j](ket, bra) over the bond left of bin j
    }
  }

  std::vector<int> idx;
  for (int k = 0; k < m; k += stride) idx.push_back(k);
  const int ns = static_cast<int>(idx.size());

  CorrelationMap map;
  map.second_order = second_order;
  map.t.resize(ns);
  for (int a = 0; a < ns; ++a) map.t[a] = t0 + (idx[a] + 0.5) * dt;
  map.values.setZero(ns, ns);

  const double scale = second_order ? 1.0 / (dt * dt) : 1.0 / dt;

  for (int a = 0; a < ns; ++a) {
    const int i = idx[a];
    const Eigen::MatrixXcd eye =
        Eigen::MatrixXcd::Identity(state.sites[i].left(), state.sites[i].left());

    // diagonal: <n(n-1)> for G2, <n> for G1 (G1(t,0) = n_T)
    const Eigen::MatrixXcd diag_env = apply_op(state.sites[i], eye, second_order ? nn1 : num);
    map.values(a, a) = (diag_env * renv[i + 1]).trace() * scale;

    Eigen::MatrixXcd env = apply_op(state.sites[i], eye, op1);
    int b = a + 1;
    for (int j = i + 1; j < m && b < ns; ++j) {
      if (j == idx[b]) {
        const Eigen::MatrixXcd closed = apply_op(state.sites[j], env, op2);
        const std::complex<double> v = (closed * renv[j + 1]).trace() * scale;
        map.values(a, b) = v;
        map.values(b, a) = second_order ? v : std::conj(v);
        ++b;
      }
      env = propagate(state.sites[j], env);
    }
  }
  return map;
}

}  // namespace biphoton::mps
