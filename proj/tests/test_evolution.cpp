#include <doctest.h>

#include <cmath>

#include "biphoton/evolution.hpp"
#include "biphoton/experiment.hpp"
#include "oracles.hpp"

using namespace biphoton;
using Complex = std::complex<double>;

namespace {

mps::TimeBinMPS excited_tls_vacuum(double dt, double t_end) {
  auto psi = mps::build_vacuum(static_cast<int>(std::llround(t_end / dt)), dt);
  psi.sites[0].blocks[0](0, 0) = 0.0;
  psi.sites[0].blocks[1](0, 0) = 1.0;
  return psi;
}

double decay_error(double dt) {
  auto psi = excited_tls_vacuum(dt, 8.0);
  mps::EvolutionParams p;
  auto rec = mps::evolve(psi, p);
  double worst = 0.0;
  for (int i = 0; i < rec.series.t.size(); ++i)
    worst = std::max(worst, std::abs(rec.series.n_tls[i] - std::exp(-rec.series.t[i])));
  return worst;
}

pulse::EnvelopeGrid tophat_grid(double t_p, double dt, double window) {
  pulse::ContinuousEnvelope env{
      [t_p](double t) { return t < t_p ? 1.0 / std::sqrt(t_p) : 0.0; }, 0.0, t_p};
  return pulse::discretize_envelope(env, dt, 0.0, window, 1e-9);
}

}  // namespace

TEST_CASE("interaction unitary: identity, rotation element, unitarity, series oracle") {
  SUBCASE("gamma*dt = 0 gives the identity") {
    const auto u = mps::interaction_step_unitary(1.0, 0.0);
    CHECK((u - Eigen::MatrixXcd::Identity(6, 6)).norm() < 1e-14);
  }
  SUBCASE("one-excitation block rotation") {
    const double gamma = 1.0, dt = 0.01;
    const auto u = mps::interaction_step_unitary(gamma, dt);
    // basis index s*d_b + n: <e,0|U|g,1> at (3, 1)
    const Complex expect = Complex(0.0, -std::sin(std::sqrt(gamma * dt)));
    CHECK(std::abs(u(3, 1) - expect) < 1e-14);
  }
  SUBCASE("unitary within 1e-12") {
    const auto u = mps::interaction_step_unitary(1.0, 0.01);
    CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(6, 6)).norm() < 1e-12);
  }
  SUBCASE("matches a series-expansion matrix exponential") {
    const double gamma = 0.7, dt = 0.04;
    const int d_b = 4;
    Eigen::MatrixXcd b = mps::bin_annihilation(d_b);
    Eigen::MatrixXcd sp = Eigen::MatrixXcd::Zero(2, 2);
    sp(1, 0) = 1.0;  // sigma+ |g> = |e>
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * d_b, 2 * d_b);
    auto kron = [&](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
      Eigen::MatrixXcd out(x.rows() * y.rows(), x.cols() * y.cols());
      for (int i = 0; i < x.rows(); ++i)
        for (int j = 0; j < x.cols(); ++j) out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
      return out;
    };
    h = kron(sp, b) + kron(sp.adjoint().eval(), b.adjoint().eval());
    const Eigen::MatrixXcd gen = Complex(0.0, -1.0) * std::sqrt(gamma * dt) * h;
    const auto oracle = oracles::expm_taylor(gen);
    const auto u = mps::interaction_step_unitary(gamma, dt, d_b);
    CHECK((u - oracle).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("excited TLS decays by the analytic law, error first order in dt") {
  const double e1 = decay_error(0.01);
  CHECK(e1 < 2e-3);
  const double e2 = decay_error(0.005);
  CHECK(e2 < e1 / 1.8);
}

TEST_CASE("single-photon top-hat: peak population from the amplitude ODE") {
  const double dt = 0.01;
  auto grid = tophat_grid(1.0, dt, 16.0);
  auto psi = mps::build_single_photon_mps(grid);
  mps::EvolutionParams p;
  auto rec = mps::evolve(psi, p);
  const double peak = rec.series.n_tls.maxCoeff();
  const double closed_form = 4.0 * std::pow(1.0 - std::exp(-0.5), 2.0);
  CHECK(std::abs(peak - closed_form) < 5e-3);

  // full trace against the independent RK4 oracle
  std::vector<double> times(rec.series.t.data(), rec.series.t.data() + rec.series.t.size());
  const auto oracle = oracles::tls_population_ode(
      [](double t) { return (t >= 0.0 && t < 1.0) ? 1.0 : 0.0; }, times, 1.0);
  double worst = 0.0;
  for (size_t i = 0; i < times.size(); ++i)
    worst = std::max(worst, std::abs(rec.series.n_tls[int(i)] - oracle[i]));
  CHECK(worst < 5e-3);
}

TEST_CASE("two-photon scattering conserves photon number and norm") {
  const double dt = 0.01;
  pulse::PulseParams pp;
  pp.shape = pulse::Shape::TopHat;
  pp.t_p = 1.0;
  pp.t_b = 2.0;
  const auto env = pulse::tophat_two_photon(pp);
  auto grid = pulse::discretize_envelope(env, dt, 0.0, 18.0, 1e-9);
  auto psi = mps::build_two_photon_mps(grid);
  mps::EvolutionParams p;
  auto rec = mps::evolve(psi, p);

  CHECK(rec.initial_photon_number == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(psi.photon_number() == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(psi.tls_population() < 1e-6);
  CHECK(rec.conservation_defect < 1e-6 + rec.discarded_weight);
  CHECK(std::abs(1.0 - psi.norm_sq()) <= rec.discarded_weight + 1e-9);
  CHECK(psi.canonical_defect() < 1e-10);
}

TEST_CASE("local bin dimension d_b = 4 changes nothing beyond 1e-10") {
  runner::ExperimentConfig cfg;
  cfg.engine = runner::Engine::Mps;
  cfg.input_state = runner::InputState::Two;
  cfg.pulse.shape = pulse::Shape::TopHat;
  cfg.pulse.t_p = 1.0;
  cfg.pulse.t_b = 1.0;
  cfg.grids.dt = 0.02;
  auto a = runner::run_mps_engine(cfg);
  cfg.grids.local_dim = 4;
  auto b = runner::run_mps_engine(cfg);
  CHECK((a.series.n_tls - b.series.n_tls).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((a.series.n_t - b.series.n_t).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((a.series.n_tt - b.series.n_tt).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("bond cap too small raises an instructive error") {
  const double dt = 0.01;
  pulse::PulseParams pp;
  pp.shape = pulse::Shape::Gaussian;
  pp.t_c = 4.0;
  pp.t_b = 2.0;
  const auto env = pulse::gaussian_two_peak(pp);
  auto grid = pulse::discretize_envelope(env, dt, 0.0, 21.0, 1e-4);
  auto psi = mps::build_two_photon_mps(grid);
  mps::EvolutionParams p;
  p.max_bond = 2;
  CHECK_THROWS_WITH_AS(mps::evolve(psi, p), doctest::Contains("max_bond"), std::exception);
}

TEST_CASE("coarse collision step is rejected") {
  auto psi = excited_tls_vacuum(0.2, 2.0);
  mps::EvolutionParams p;  // gamma * dt = 0.2 > 0.1
  CHECK_THROWS_AS(mps::evolve(psi, p), std::exception);
}
