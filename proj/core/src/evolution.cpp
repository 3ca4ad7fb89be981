#include "biphoton/evolution.hpp"

#include <cmath>
#include <stdexcept>

namespace biphoton::mps {

namespace {

struct SplitResult {
  SiteTensor left;
  SiteTensor right;
  double discarded = 0.0;  // relative squared weight
  int kept = 0;
};

// Split a two-site tensor with the bin going left and the TLS going right,
// OC ending on the TLS.  theta rows are (b*l + l_idx)? -- see build below.
SplitResult split_swap(const Eigen::MatrixXcd& theta, int l_dim, int r_dim, int d_b,
                       double cutoff, int max_bond) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(theta, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const int n = static_cast<int>(sv.size());
  const double total = sv.squaredNorm();

  int keep = n;
  double tail = 0.0;
  while (keep > 1) {
    const double s2 = sv[keep - 1] * sv[keep - 1];
    if (tail + s2 > cutoff * total) break;
    tail += s2;
    --keep;
  }
  // never split a degenerate pair: extend the cut to include near-equal values
  while (keep < n && sv[keep] > sv[keep - 1] * (1.0 - 1e-12)) ++keep;
  if (keep > max_bond) {
    keep = max_bond;
    double cut = 0.0;
    for (int i = keep; i < n; ++i) cut += sv[i] * sv[i];
    if (cut > 1e-6 * total)
      throw std::runtime_error(
          "bond dimension cap exceeded with discarded weight above 1e-6; increase max_bond");
  }
  double disc = 0.0;
  for (int i = keep; i < n; ++i) disc += sv[i] * sv[i];

  const Eigen::MatrixXcd u = svd.matrixU().leftCols(keep);
  const Eigen::MatrixXcd svh =
      sv.head(keep).asDiagonal() * svd.matrixV().leftCols(keep).adjoint();

  SplitResult out;
  out.kept = keep;
  out.discarded = disc / total;
  out.left.blocks.reserve(d_b);
  for (int b = 0; b < d_b; ++b) out.left.blocks.push_back(u.middleRows(b * l_dim, l_dim));
  out.right.blocks.reserve(2);
  for (int s = 0; s < 2; ++s) out.right.blocks.push_back(svh.middleCols(s * r_dim, r_dim));
  return out;
}

}  // namespace

Eigen::MatrixXcd interaction_step_unitary(double gamma, double dt, int d_b) {
  if (gamma <= 0.0 || dt < 0.0)
    throw std::invalid_argument("gamma must be > 0 and dt must be >= 0");
  const int dim = 2 * d_b;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  const std::complex<double> mi(0.0, -1.0);
  // sectors {|e,n>, |g,n+1>} rotate with angle sqrt(gamma dt (n+1))
  for (int n = 0; n + 1 < d_b; ++n) {
    const double theta = std::sqrt(gamma * dt * (n + 1));
    const int e_n = d_b + n;
    const int g_n1 = n + 1;
    u(e_n, e_n) = std::cos(theta);
    u(g_n1, g_n1) = std::cos(theta);
    u(e_n, g_n1) = mi * std::sin(theta);
    u(g_n1, e_n) = mi * std::sin(theta);
  }
  return u;
}

EvolveRecord evolve(TimeBinMPS& state, const EvolutionParams& p, double t0) {
  const int m = state.num_bins();
  const int d_b = state.d_b;
  const double dt = state.dt;
  if (p.gamma * dt > 0.1)
    throw std::invalid_argument("gamma*dt > 0.1: time step too coarse for the collision model");

  EvolveRecord rec;
  auto& s = rec.series;
  s.t.resize(m);
  s.n_in.resize(m);
  s.n_tls.resize(m);
  s.n_t.resize(m);
  s.n_tt.resize(m);

  // Input fluxes, measured on the chain before any interaction.
  for (int k = 0; k < m; ++k) s.n_in[k] = state.flux(k);
  double tls0 = state.tls_population();
  rec.initial_photon_number = s.n_in.sum() * dt;
  const double n_total = rec.initial_photon_number + tls0;

  state.move_oc_to(state.tls_pos);

  const Eigen::MatrixXcd u = interaction_step_unitary(p.gamma, dt, d_b);
  double transmitted = 0.0;  // sum of scattered fluxes * dt so far
  double remaining = rec.initial_photon_number;
  double prev_pop = tls0;

  for (int k = 0; k < m; ++k) {
    const SiteTensor& tls = state.sites[state.tls_pos];
    const SiteTensor& bin = state.sites[state.tls_pos + 1];
    const int l_dim = tls.left();
    const int r_dim = bin.right();

    // two-site tensor C[s][b] (l x r), then apply U over the (s,b) indices
    std::vector<Eigen::MatrixXcd> c(2 * d_b);
    for (int si = 0; si < 2; ++si)
      for (int b = 0; b < d_b; ++b) c[si * d_b + b] = tls.blocks[si] * bin.blocks[b];
    std::vector<Eigen::MatrixXcd> c2(2 * d_b, Eigen::MatrixXcd::Zero(l_dim, r_dim));
    for (int row = 0; row < 2 * d_b; ++row)
      for (int col = 0; col < 2 * d_b; ++col) {
        if (u(row, col) == 0.0) continue;
        c2[row] += u(row, col) * c[col];
      }

    // diagonal observables straight off the post-step two-site tensor
    double pop = 0.0, nb = 0.0, nnb = 0.0;
    for (int si = 0; si < 2; ++si)
      for (int b = 0; b < d_b; ++b) {
        const double w = c2[si * d_b + b].squaredNorm();
        if (si == 1) pop += w;
        nb += b * w;
        nnb += static_cast<double>(b) * (b - 1) * w;
      }

    s.t[k] = t0 + (k + 0.5) * dt;
    s.n_t[k] = nb / dt;
    s.n_tt[k] = nnb / (dt * dt);
    s.n_tls[k] = 0.5 * (prev_pop + pop);  // midpoint estimate
    prev_pop = pop;

    transmitted += nb;
    remaining -= s.n_in[k] * dt;
    rec.conservation_defect =
        std::max(rec.conservation_defect, std::abs(pop + transmitted + remaining - n_total));

    // split with swap: bin to the left, TLS (with the OC) to the right
    Eigen::MatrixXcd theta(l_dim * d_b, 2 * r_dim);
    for (int si = 0; si < 2; ++si)
      for (int b = 0; b < d_b; ++b)
        theta.block(b * l_dim, si * r_dim, l_dim, r_dim) = c2[si * d_b + b];
    auto split = split_swap(theta, l_dim, r_dim, d_b, p.svd_cutoff, p.max_bond);
    rec.discarded_weight += split.discarded;
    rec.max_bond_reached = std::max(rec.max_bond_reached, split.kept);

    state.sites[state.tls_pos] = std::move(split.left);
    state.sites[state.tls_pos + 1] = std::move(split.right);
    ++state.tls_pos;
    state.oc = state.tls_pos;
  }
  return rec;
}

}  // namespace biphoton::mps
