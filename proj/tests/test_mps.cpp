#include <doctest.h>

#include <cmath>
#include <vector>

#include "biphoton/mps.hpp"

using namespace biphoton;
using Complex = std::complex<double>;

namespace {

// Contracts a small chain into the full state vector; index order is
// (site 0, site 1, ...) with site 0 the TLS.
Eigen::VectorXcd densify(const mps::TimeBinMPS& psi) {
  std::vector<int> dims;
  long total = 1;
  for (const auto& s : psi.sites) {
    dims.push_back(s.phys());
    total *= s.phys();
  }
  Eigen::VectorXcd out(total);
  std::vector<int> idx(dims.size(), 0);
  for (long flat = 0; flat < total; ++flat) {
    long rem = flat;
    for (int s = static_cast<int>(dims.size()) - 1; s >= 0; --s) {
      idx[s] = static_cast<int>(rem % dims[s]);
      rem /= dims[s];
    }
    Eigen::MatrixXcd acc = psi.sites[0].blocks[idx[0]];
    for (size_t s = 1; s < dims.size(); ++s) acc = (acc * psi.sites[s].blocks[idx[s]]).eval();
    out[flat] = acc(0, 0);
  }
  return out;
}

// Flat index for (tls, n_1, ..., n_m) with bin dimension d_b.
long flat_index(const std::vector<int>& occ, int d_b) {
  long f = occ[0];
  for (size_t s = 1; s < occ.size(); ++s) f = f * d_b + occ[s];
  return f;
}

pulse::EnvelopeGrid grid_from(const std::vector<Complex>& v, double dt = 0.01, double t0 = 0.0) {
  pulse::EnvelopeGrid g;
  g.dt = dt;
  g.t0 = t0;
  g.values = Eigen::Map<const Eigen::VectorXcd>(v.data(), v.size());
  return g;
}

}  // namespace

TEST_CASE("bin operators obey the truncated ladder algebra") {
  const auto b = mps::bin_annihilation(3);
  const auto n = mps::bin_number(3);
  const auto nn = mps::bin_pair_number(3);
  CHECK((b.adjoint() * b - n).norm() < 1e-15);
  CHECK(std::abs(b(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(b(1, 2) - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(nn(2, 2) - 2.0) < 1e-15);
  CHECK(std::abs(nn(1, 1)) < 1e-15);
}

TEST_CASE("vacuum chain: unit norm, zero flux, ground TLS") {
  auto psi = mps::build_vacuum(10, 0.01);
  CHECK(psi.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(psi.tls_population() == doctest::Approx(0.0));
  for (int k = 0; k < 10; ++k) CHECK(psi.flux(k) == doctest::Approx(0.0));
}

TEST_CASE("single-photon chain amplitudes and photon number") {
  SUBCASE("f = (1, 0) is exactly |1, 0>") {
    auto psi = mps::build_single_photon_mps(grid_from({1.0, 0.0}));
    const auto v = densify(psi);
    CHECK(std::abs(std::abs(v[flat_index({0, 1, 0}, 3)]) - 1.0) < 1e-12);
    CHECK(v.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("uniform envelope gives equal amplitudes 1/sqrt(m)") {
    const int m = 5;
    std::vector<Complex> f(m, 1.0 / std::sqrt(double(m)));
    auto psi = mps::build_single_photon_mps(grid_from(f));
    const auto v = densify(psi);
    for (int k = 0; k < m; ++k) {
      std::vector<int> occ(m + 1, 0);
      occ[k + 1] = 1;
      CHECK(std::abs(std::abs(v[flat_index(occ, 3)]) - 1.0 / std::sqrt(double(m))) < 1e-12);
    }
    CHECK(psi.photon_number() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("two-photon chain reproduces the explicit expansion") {
  SUBCASE("m=2 uniform") {
    const double r = 1.0 / std::sqrt(2.0);
    auto psi = mps::build_two_photon_mps(grid_from({r, r}));
    const auto v = densify(psi);
    CHECK(std::abs(std::abs(v[flat_index({0, 2, 0}, 3)]) - 0.5) < 1e-10);
    CHECK(std::abs(std::abs(v[flat_index({0, 1, 1}, 3)]) - r) < 1e-10);
    CHECK(std::abs(std::abs(v[flat_index({0, 0, 2}, 3)]) - 0.5) < 1e-10);
    CHECK(psi.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("m=3 cross-term coefficient sqrt(2) a c") {
    const double a = 0.6, b = std::sqrt(1.0 - 0.36 - 0.25), c = 0.5;
    auto psi = mps::build_two_photon_mps(grid_from({a, b, c}));
    const auto v = densify(psi);
    CHECK(std::abs(std::abs(v[flat_index({0, 1, 0, 1}, 3)]) - std::sqrt(2.0) * a * c) < 1e-10);
  }
  SUBCASE("photon number is 2") {
    std::vector<Complex> f(40);
    double nrm = 0.0;
    for (size_t k = 0; k < f.size(); ++k) {
      f[k] = std::exp(-0.01 * (double(k) - 20.0) * (double(k) - 20.0));
      nrm += std::norm(f[k]);
    }
    for (auto& x : f) x /= std::sqrt(nrm);
    auto psi = mps::build_two_photon_mps(grid_from(f));
    CHECK(psi.photon_number() == doctest::Approx(2.0).epsilon(1e-9));
    CHECK_MESSAGE(psi.canonical_defect() < 1e-10, "canonical form after construction");
  }
  SUBCASE("non-normalized envelope rejected") {
    CHECK_THROWS_AS(mps::build_two_photon_mps(grid_from({1.0, 1.0})), std::exception);
  }
}

TEST_CASE("concat of disjoint single-photon pulses") {
  std::vector<Complex> u(100, 0.1);
  auto f1 = grid_from(u, 0.01, 0.0);
  auto f2 = grid_from(u, 0.01, 2.0);  // bins 200..299
  auto psi = mps::concat_product_pulses(f1, f2, 0.0, 300);
  CHECK(psi.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(psi.photon_number() == doctest::Approx(2.0).epsilon(1e-9));
  for (int k = 100; k < 200; ++k) CHECK(psi.flux(k) == doctest::Approx(0.0));
  // at most one photon per bin: same-time pair flux vanishes everywhere
  for (int k = 0; k < 300; k += 17) CHECK(psi.pair_flux(k) == doctest::Approx(0.0));

  auto f2bad = grid_from(u, 0.01, 0.5);  // bins 50..149 overlap f1
  CHECK_THROWS_WITH_AS(mps::concat_product_pulses(f1, f2bad, 0.0, 300),
                       doctest::Contains("overlap"), std::exception);
}

TEST_CASE("symmetrized pair builder") {
  SUBCASE("disjoint supports reduce to the product state") {
    auto f1 = grid_from({1.0, 0.0, 0.0});
    auto f2 = grid_from({0.0, 0.0, 1.0});
    auto psi = mps::build_symmetrized_pair_mps(f1, f2);
    const auto v = densify(psi);
    CHECK(std::abs(std::abs(v[flat_index({0, 1, 0, 1}, 3)]) - 1.0) < 1e-10);
  }
  SUBCASE("identical envelopes reproduce the two-photon Fock chain") {
    const double r = 1.0 / std::sqrt(2.0);
    auto f = grid_from({r, r});
    auto pair = mps::build_symmetrized_pair_mps(f, f);
    auto fock = mps::build_two_photon_mps(f);
    const Eigen::VectorXd va = densify(pair).cwiseAbs();
    const Eigen::VectorXd vb = densify(fock).cwiseAbs();
    CHECK((va - vb).maxCoeff() < 1e-10);
  }
  SUBCASE("norm and photon number with partial overlap") {
    std::vector<Complex> a = {0.8, 0.6, 0.0};
    std::vector<Complex> b = {0.0, 0.6, 0.8};
    auto psi = mps::build_symmetrized_pair_mps(grid_from(a), grid_from(b));
    CHECK(psi.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(psi.photon_number() == doctest::Approx(2.0).epsilon(1e-9));
  }
}

TEST_CASE("canonical moves preserve the state and the canonical form") {
  std::vector<Complex> f(12);
  double nrm = 0.0;
  for (size_t k = 0; k < f.size(); ++k) {
    f[k] = 1.0 + 0.2 * double(k % 3);
    nrm += std::norm(f[k]);
  }
  for (auto& x : f) x /= std::sqrt(nrm);
  auto psi = mps::build_two_photon_mps(grid_from(f));
  const Eigen::VectorXd ref = densify(psi).cwiseAbs();
  psi.move_oc_to(psi.size() - 1);
  CHECK(psi.canonical_defect() < 1e-10);
  psi.move_oc_to(3);
  CHECK(psi.canonical_defect() < 1e-10);
  CHECK((densify(psi).cwiseAbs() - ref).maxCoeff() < 1e-10);
  CHECK(psi.norm_sq() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("local measurements on prepared bins") {
  // a bin holding exactly one photon has flux 1/dt and zero pair flux
  auto psi = mps::build_single_photon_mps(grid_from({1.0, 0.0}));
  CHECK(psi.flux(0) == doctest::Approx(1.0 / 0.01).epsilon(1e-9));
  CHECK(psi.pair_flux(0) == doctest::Approx(0.0));
  // |2> in one bin: flux 2/dt, pair flux 2/dt^2
  pulse::EnvelopeGrid g = grid_from({1.0, 0.0});
  auto two = mps::build_two_photon_mps(g);
  CHECK(two.flux(0) == doctest::Approx(2.0 / 0.01).epsilon(1e-9));
  CHECK(two.pair_flux(0) == doctest::Approx(2.0 / 0.0001).epsilon(1e-9));
}
