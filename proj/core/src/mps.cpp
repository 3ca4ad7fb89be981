#include "biphoton/mps.hpp"

#include <cmath>
#include <stdexcept>

namespace biphoton::mps {

namespace {

// Reshape a site into a ((left*phys) x right) matrix, row index p*left + l.
Eigen::MatrixXcd fold_left(const SiteTensor& s) {
  Eigen::MatrixXcd m(s.left() * s.phys(), s.right());
  for (int p = 0; p < s.phys(); ++p) m.middleRows(p * s.left(), s.left()) = s.blocks[p];
  return m;
}

// Reshape a site into a (left x (phys*right)) matrix, col index p*right + r.
Eigen::MatrixXcd fold_right(const SiteTensor& s) {
  Eigen::MatrixXcd m(s.left(), s.right() * s.phys());
  for (int p = 0; p < s.phys(); ++p) m.middleCols(p * s.right(), s.right()) = s.blocks[p];
  return m;
}

SiteTensor unfold_left(const Eigen::MatrixXcd& m, int phys, int left) {
  SiteTensor s;
  s.blocks.reserve(phys);
  for (int p = 0; p < phys; ++p) s.blocks.push_back(m.middleRows(p * left, left));
  return s;
}

SiteTensor unfold_right(const Eigen::MatrixXcd& m, int phys, int right) {
  SiteTensor s;
  s.blocks.reserve(phys);
  for (int p = 0; p < phys; ++p) s.blocks.push_back(m.middleCols(p * right, right));
  return s;
}

SiteTensor vacuum_bin(int d_b) {
  SiteTensor s;
  s.blocks.assign(d_b, Eigen::MatrixXcd::Zero(1, 1));
  s.blocks[0](0, 0) = 1.0;
  return s;
}

SiteTensor tls_ground() {
  SiteTensor s;
  s.blocks.assign(2, Eigen::MatrixXcd::Zero(1, 1));
  s.blocks[0](0, 0) = 1.0;
  return s;
}

void check_normalized(const pulse::EnvelopeGrid& f) {
  if (std::abs(f.norm_sq() - 1.0) > 1e-8)
    throw std::invalid_argument("envelope grid is not unit-normalized");
}

// Single-photon generating chain over the bins of f (bond dimension 2).
std::vector<SiteTensor> single_photon_chain(const pulse::EnvelopeGrid& f, int d_b) {
  const int m = f.size();
  std::vector<SiteTensor> chain;
  chain.reserve(m);
  if (m == 1) {
    SiteTensor s;
    s.blocks.assign(d_b, Eigen::MatrixXcd::Zero(1, 1));
    s.blocks[1](0, 0) = f.values[0];
    chain.push_back(s);
    return chain;
  }
  for (int k = 0; k < m; ++k) {
    const Complex fk = f.values[k];
    SiteTensor s;
    if (k == 0) {
      s.blocks.assign(d_b, Eigen::MatrixXcd::Zero(1, 2));
      s.blocks[0] << 1.0, 0.0;
      s.blocks[1] << 0.0, fk;
    } else if (k == m - 1) {
      s.blocks.assign(d_b, Eigen::MatrixXcd::Zero(2, 1));
      s.blocks[0] << 0.0, 1.0;
      s.blocks[1] << fk, 0.0;
    } else {
      s.blocks.assign(d_b, Eigen::MatrixXcd::Zero(2, 2));
      s.blocks[0] = Eigen::MatrixXcd::Identity(2, 2);
      s.blocks[1] << 0.0, fk, 0.0, 0.0;
    }
    chain.push_back(s);
  }
  return chain;
}

}  // namespace

Eigen::MatrixXcd bin_annihilation(int d) {
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 1; n < d; ++n) b(n - 1, n) = std::sqrt(static_cast<double>(n));
  return b;
}

Eigen::MatrixXcd bin_number(int d) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n < d; ++n) m(n, n) = n;
  return m;
}

Eigen::MatrixXcd bin_pair_number(int d) {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n < d; ++n) m(n, n) = static_cast<double>(n) * (n - 1);
  return m;
}

double TimeBinMPS::norm_sq() const {
  double s = 0.0;
  for (const auto& b : sites[oc].blocks) s += b.squaredNorm();
  return s;
}

void TimeBinMPS::move_oc_right() {
  if (oc + 1 >= size()) throw std::logic_error("move_oc_right at chain end");
  SiteTensor& a = sites[oc];
  const Eigen::MatrixXcd m = fold_left(a);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m);
  const int rank = std::min<int>(m.rows(), m.cols());
  Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(m.rows(), rank);
  Eigen::MatrixXcd r = qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
  sites[oc] = unfold_left(q, a.phys(), a.left());
  SiteTensor& b = sites[oc + 1];
  for (auto& blk : b.blocks) blk = r * blk;
  ++oc;
}

void TimeBinMPS::move_oc_left() {
  if (oc == 0) throw std::logic_error("move_oc_left at chain start");
  SiteTensor& a = sites[oc];
  const Eigen::MatrixXcd m = fold_right(a);
  // LQ via QR of the adjoint: m = l q with q having orthonormal rows.
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(m.adjoint());
  const int rank = std::min<int>(m.rows(), m.cols());
  Eigen::MatrixXcd q =
      (qr.householderQ() * Eigen::MatrixXcd::Identity(m.cols(), rank)).adjoint();
  Eigen::MatrixXcd l =
      Eigen::MatrixXcd(qr.matrixQR().topRows(rank).triangularView<Eigen::Upper>()).adjoint();
  sites[oc] = unfold_right(q, a.phys(), a.right());
  SiteTensor& b = sites[oc - 1];
  for (auto& blk : b.blocks) blk = blk * l;
  --oc;
}

void TimeBinMPS::move_oc_to(int site) {
  while (oc < site) move_oc_right();
  while (oc > site) move_oc_left();
}

Complex TimeBinMPS::expect_local(int site, const Eigen::MatrixXcd& op) {
  move_oc_to(site);
  const SiteTensor& a = sites[site];
  Complex v = 0.0;
  for (int p = 0; p < a.phys(); ++p)
    for (int q = 0; q < a.phys(); ++q) {
      const Complex o = op(q, p);
      if (o == 0.0) continue;
      v += o * (a.blocks[q].conjugate().cwiseProduct(a.blocks[p])).sum();
    }
  return v;
}

double TimeBinMPS::canonical_defect() const {
  double worst = 0.0;
  for (int i = 0; i < size(); ++i) {
    if (i == oc) continue;
    const SiteTensor& a = sites[i];
    Eigen::MatrixXcd acc;
    if (i < oc) {
      acc = Eigen::MatrixXcd::Zero(a.right(), a.right());
      for (const auto& b : a.blocks) acc += b.adjoint() * b;
    } else {
      acc = Eigen::MatrixXcd::Zero(a.left(), a.left());
      for (const auto& b : a.blocks) acc += b * b.adjoint();
    }
    acc -= Eigen::MatrixXcd::Identity(acc.rows(), acc.cols());
    worst = std::max(worst, acc.cwiseAbs().maxCoeff());
  }
  return worst;
}

double TimeBinMPS::tls_population() {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(2, 2);
  p(1, 1) = 1.0;
  return expect_local(tls_pos, p).real();
}

double TimeBinMPS::flux(int bin) {
  return expect_local(bin_site(bin), bin_number(d_b)).real() / dt;
}

double TimeBinMPS::pair_flux(int bin) {
  return expect_local(bin_site(bin), bin_pair_number(d_b)).real() / (dt * dt);
}

double TimeBinMPS::photon_number() {
  const Eigen::MatrixXcd n = bin_number(d_b);
  double total = 0.0;
  for (int k = 0; k < num_bins(); ++k) total += expect_local(bin_site(k), n).real();
  return total;
}

TimeBinMPS build_vacuum(int m, double dt, int d_b) {
  if (m < 1) throw std::invalid_argument("build_vacuum: need at least one bin");
  TimeBinMPS psi;
  psi.dt = dt;
  psi.d_b = d_b;
  psi.sites.push_back(tls_ground());
  for (int k = 0; k < m; ++k) psi.sites.push_back(vacuum_bin(d_b));
  psi.oc = 0;
  psi.tls_pos = 0;
  return psi;
}

TimeBinMPS build_single_photon_mps(const pulse::EnvelopeGrid& f, int d_b) {
  check_normalized(f);
  TimeBinMPS psi;
  psi.dt = f.dt;
  psi.d_b = d_b;
  psi.sites.push_back(tls_ground());
  auto chain = single_photon_chain(f, d_b);
  for (auto& s : chain) psi.sites.push_back(std::move(s));
  psi.tls_pos = 0;
  psi.oc = psi.size() - 1;
  psi.move_oc_to(0);
  return psi;
}

TimeBinMPS build_two_photon_mps(const pulse::EnvelopeGrid& f, int d_b) {
  check_normalized(f);
  const int m = f.size();
  if (m < 2) throw std::invalid_argument("build_two_photon_mps: need at least two bins");
  if (d_b < 3) throw std::invalid_argument("build_two_photon_mps: need d_b >= 3");

  TimeBinMPS psi;
  psi.dt = f.dt;
  psi.d_b = d_b;
  psi.sites.push_back(tls_ground());

  const double sqrt2 = std::sqrt(2.0);
  for (int k = 0; k < m; ++k) {
    const Complex fk = f.values[k];
    const Complex f2 = fk * fk / sqrt2;
    SiteTensor s;
    if (k == 0) {
      // boundary row vectors, overall sqrt(2) normalization folded in here
      s.blocks.assign(d_b, Eigen::MatrixXcd::Zero(1, 3));
      s.blocks[0] << sqrt2, 0.0, 0.0;
      s.blocks[1] << 0.0, sqrt2 * fk, 0.0;
      s.blocks[2] << 0.0, 0.0, sqrt2 * f2;
    } else if (k == m - 1) {
      s.blocks.assign(d_b, Eigen::MatrixXcd::Zero(3, 1));
      s.blocks[0] << 0.0, 0.0, 1.0;
      s.blocks[1] << 0.0, fk, 0.0;
      s.blocks[2] << f2, 0.0, 0.0;
    } else {
      s.blocks.assign(d_b, Eigen::MatrixXcd::Zero(3, 3));
      s.blocks[0] = Eigen::MatrixXcd::Identity(3, 3);
      s.blocks[1] << 0.0, fk, 0.0, 0.0, 0.0, fk, 0.0, 0.0, 0.0;
      s.blocks[2] << 0.0, 0.0, f2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0;
    }
    psi.sites.push_back(std::move(s));
  }
  psi.tls_pos = 0;
  psi.oc = psi.size() - 1;
  psi.move_oc_to(0);
  return psi;
}

TimeBinMPS concat_product_pulses(const pulse::EnvelopeGrid& f1, const pulse::EnvelopeGrid& f2,
                                 double t0, int m, int d_b) {
  check_normalized(f1);
  check_normalized(f2);
  if (std::abs(f1.dt - f2.dt) > 1e-12 * f1.dt)
    throw std::invalid_argument("concat_product_pulses: bin widths differ");
  const double dt = f1.dt;
  const int o1 = static_cast<int>(std::llround((f1.t0 - t0) / dt));
  const int o2 = static_cast<int>(std::llround((f2.t0 - t0) / dt));
  if (o1 < 0 || o2 < 0 || o1 + f1.size() > m || o2 + f2.size() > m)
    throw std::invalid_argument("concat_product_pulses: envelope bins outside the chain");
  if (o1 + f1.size() > o2)
    throw std::invalid_argument("concat_product_pulses: overlapping single-photon bin supports");

  TimeBinMPS psi;
  psi.dt = dt;
  psi.d_b = d_b;
  psi.sites.push_back(tls_ground());
  auto c1 = single_photon_chain(f1, d_b);
  auto c2 = single_photon_chain(f2, d_b);
  int k = 0;
  for (; k < o1; ++k) psi.sites.push_back(vacuum_bin(d_b));
  for (auto& s : c1) psi.sites.push_back(std::move(s)), ++k;
  for (; k < o2; ++k) psi.sites.push_back(vacuum_bin(d_b));
  for (auto& s : c2) psi.sites.push_back(std::move(s)), ++k;
  for (; k < m; ++k) psi.sites.push_back(vacuum_bin(d_b));

  psi.tls_pos = 0;
  psi.oc = psi.size() - 1;
  psi.move_oc_to(0);
  return psi;
}

TimeBinMPS build_symmetrized_pair_mps(const pulse::EnvelopeGrid& f1,
                                      const pulse::EnvelopeGrid& f2, int d_b) {
  check_normalized(f1);
  check_normalized(f2);
  const int m = f1.size();
  if (f2.size() != m || std::abs(f1.dt - f2.dt) > 1e-12 * f1.dt ||
      std::abs(f1.t0 - f2.t0) > 1e-9 * f1.dt)
    throw std::invalid_argument("build_symmetrized_pair_mps: envelope grids differ");
  if (m < 2) throw std::invalid_argument("build_symmetrized_pair_mps: need at least two bins");
  if (d_b < 3) throw std::invalid_argument("build_symmetrized_pair_mps: need d_b >= 3");

  const Complex ip = f1.values.dot(f2.values);  // <f1, f2>
  const double knorm = 1.0 / std::sqrt(1.0 + std::norm(ip));
  const double sqrt2 = std::sqrt(2.0);

  TimeBinMPS psi;
  psi.dt = f1.dt;
  psi.d_b = d_b;
  psi.sites.push_back(tls_ground());

  // Bond states: 0 = neither photon emitted yet, 1 = photon 1 emitted,
  // 2 = photon 2 emitted, 3 = both emitted.
  for (int k = 0; k < m; ++k) {
    const Complex a = f1.values[k];
    const Complex b = f2.values[k];
    Eigen::MatrixXcd m0 = Eigen::MatrixXcd::Identity(4, 4);
    Eigen::MatrixXcd m1 = Eigen::MatrixXcd::Zero(4, 4);
    m1(0, 1) = a;
    m1(0, 2) = b;
    m1(1, 3) = b;
    m1(2, 3) = a;
    Eigen::MatrixXcd m2 = Eigen::MatrixXcd::Zero(4, 4);
    m2(0, 3) = sqrt2 * a * b;
    SiteTensor s;
    s.blocks.assign(d_b, Eigen::MatrixXcd::Zero(4, 4));
    s.blocks[0] = m0;
    s.blocks[1] = m1;
    s.blocks[2] = m2;
    if (k == 0) {
      for (auto& blk : s.blocks) blk = (knorm * blk.row(0)).eval();
    }
    if (k == m - 1) {
      for (auto& blk : s.blocks) blk = blk.col(3).eval();
    }
    psi.sites.push_back(std::move(s));
  }
  psi.tls_pos = 0;
  psi.oc = psi.size() - 1;
  psi.move_oc_to(0);
  return psi;
}

}  // namespace biphoton::mps
