#include <doctest.h>

#include <cmath>
#include <complex>

#include "biphoton/pulse.hpp"
#include "biphoton/scattering.hpp"
#include "biphoton/spectrum.hpp"

using namespace biphoton;
using Complex = std::complex<double>;

TEST_CASE("Gaussian spectral amplitude values") {
  pulse::FrequencyGrid fg{30.0, 1024};
  const auto g = pulse::gaussian_spectral_amplitude(fg, 1.0, 4.0);
  // find the omega = 0 index (grid is symmetric with odd spacing count)
  int k0 = -1;
  for (int k = 0; k < fg.n; ++k)
    if (std::abs(fg.omega(k)) < 0.5 * fg.domega()) k0 = k;
  REQUIRE(k0 >= 0);
  // exact evaluations at grid-independent points
  auto value = [&](double w) { return std::exp(-0.5 * w * w) * std::exp(Complex(0.0, w * 4.0)); };
  for (int k : {k0, k0 + 5, k0 + 100}) {
    const double w = fg.omega(k);
    CHECK(std::abs(g.values[k] - value(w)) < 1e-12);
  }
  // |g| is independent of the center
  const auto g2 = pulse::gaussian_spectral_amplitude(fg, 1.0, 12.0);
  CHECK((g.values.cwiseAbs() - g2.values.cwiseAbs()).maxCoeff() < 1e-14);
}

TEST_CASE("mixed_spectra linear combinations and grid mismatch") {
  pulse::FrequencyGrid fg{10.0, 256};
  pulse::SpectralAmplitude a{fg, Eigen::VectorXcd::Zero(fg.n)};
  pulse::SpectralAmplitude b{fg, Eigen::VectorXcd::Zero(fg.n)};
  a.values[10] = 1.0;
  b.values[20] = 1.0;

  SUBCASE("alpha = 0 returns the inputs") {
    const auto [f1, f2] = pulse::mixed_spectra(0.0, a, b);
    CHECK((f1.values - a.values).norm() == 0.0);
    CHECK((f2.values - b.values).norm() == 0.0);
  }
  SUBCASE("alpha = 0.5 makes the two spectra equal") {
    const auto [f1, f2] = pulse::mixed_spectra(0.5, a, b);
    CHECK((f1.values - f2.values).norm() == 0.0);
    CHECK(std::abs(f1.values[10] - Complex(0.5)) < 1e-15);
  }
  SUBCASE("alpha = 0.25 weights") {
    const auto [f1, f2] = pulse::mixed_spectra(0.25, a, b);
    CHECK(std::abs(f1.values[10] - Complex(0.75)) < 1e-15);
    CHECK(std::abs(f2.values[10] - Complex(0.25)) < 1e-15);
  }
  SUBCASE("mismatched grids rejected") {
    pulse::FrequencyGrid other{10.0, 128};
    pulse::SpectralAmplitude c{other, Eigen::VectorXcd::Zero(other.n)};
    CHECK_THROWS_AS(pulse::mixed_spectra(0.0, a, c), std::exception);
  }
}

TEST_CASE("symmetrized spectrum: K for orthogonal and identical factors") {
  pulse::FrequencyGrid fg{10.0, 64};
  const double w = std::sqrt(fg.domega());
  pulse::SpectralAmplitude a{fg, Eigen::VectorXcd::Zero(fg.n)};
  pulse::SpectralAmplitude b{fg, Eigen::VectorXcd::Zero(fg.n)};
  a.values[5] = 1.0 / w;  // unit norm under the domega quadrature weight
  b.values[9] = 1.0 / w;

  SUBCASE("orthonormal factors: K = 1/sqrt(2)") {
    const auto f = pulse::symmetrized_two_photon_spectrum(a, b);
    CHECK(std::abs(f.values(5, 9) * w * w - 1.0 / std::sqrt(2.0)) < 1e-12);
    CHECK(f.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("identical factors: K = 1/2") {
    const auto f = pulse::symmetrized_two_photon_spectrum(a, a);
    // f(5,5) = K * 2 * a(5)^2, so K = f(5,5) w^2 / 2
    CHECK(std::abs(f.values(5, 5) * w * w / 2.0 - 0.5) < 1e-12);
    CHECK(f.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("zero-norm input rejected") {
    pulse::SpectralAmplitude z{fg, Eigen::VectorXcd::Zero(fg.n)};
    CHECK_THROWS_AS(pulse::symmetrized_two_photon_spectrum(a, z), std::exception);
  }
}

TEST_CASE("symmetrized spectrum is exchange-symmetric, unit norm, t_b=0 degenerate") {
  pulse::FrequencyGrid fg{30.0, 512};
  const auto g1 = pulse::gaussian_spectral_amplitude(fg, 1.0, 4.0);
  const auto g2 = pulse::gaussian_spectral_amplitude(fg, 1.0, 12.0);
  const auto f = pulse::symmetrized_two_photon_spectrum(g1, g2);
  CHECK((f.values - f.values.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(f.norm_sq() == doctest::Approx(1.0).epsilon(1e-12));

  // t_b = 0: the alpha = 0 and alpha = 0.5 constructions coincide
  const auto [a0_1, a0_2] = pulse::mixed_spectra(0.0, g1, g1);
  const auto [a5_1, a5_2] = pulse::mixed_spectra(0.5, g1, g1);
  const auto fa = pulse::symmetrized_two_photon_spectrum(a0_1, a0_2);
  const auto fb = pulse::symmetrized_two_photon_spectrum(a5_1, a5_2);
  CHECK((fa.values - fb.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("time/frequency Gaussian representations are Fourier-consistent") {
  // inverse transform of g1 onto a time grid reproduces the time-domain
  // Gaussian envelope up to a global phase
  pulse::FrequencyGrid fg{30.0, 1024};
  const double t_c = 4.0;
  auto g = pulse::gaussian_spectral_amplitude(fg, 1.0, t_c);
  const double nrm = std::sqrt(g.norm_sq());
  g.values /= nrm;

  scatter::TimeGrid tg{t_c - 8.0, 0.025, 641};  // spans +-8 sigma
  const Eigen::VectorXcd phi = scatter::spectrum_to_time_1d(g, tg);
  double worst = 0.0;
  for (int i = 0; i < tg.n; ++i) {
    const double expect = pulse::gaussian_single_envelope(tg.t(i), t_c, 1.0);
    worst = std::max(worst, std::abs(std::abs(phi[i]) - expect));
  }
  CHECK(worst < 1e-6);
}
