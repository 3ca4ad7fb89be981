#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "biphoton/csv_io.hpp"

using namespace biphoton;
namespace fs = std::filesystem;

namespace {
fs::path tmpdir() {
  auto d = fs::temp_directory_path() / "biphoton_csv_test";
  fs::create_directories(d);
  return d;
}

std::string first_line(const fs::path& p) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  return line;
}
}  // namespace

TEST_CASE("series CSV round-trip") {
  ObservableSeries s;
  const int n = 7;
  s.t.setLinSpaced(n, 0.005, 0.065);
  s.n_in.setRandom(n);
  s.n_tls.setRandom(n);
  s.n_t.setRandom(n);
  s.n_tt.setRandom(n);
  const auto path = tmpdir() / "series.csv";
  io::write_series_csv(path.string(), s);
  CHECK(first_line(path) == "t,n_in,n_tls,n_t,n_tt");
  const auto r = io::read_series_csv(path.string());
  REQUIRE(r.t.size() == n);
  CHECK((r.t - s.t).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((r.n_tt - s.n_tt).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("map CSV round-trip, both orders") {
  CorrelationMap m;
  const int n = 5;
  m.t.setLinSpaced(n, 0.0, 4.0);
  m.values.setRandom(n, n);

  SUBCASE("G2 (real values)") {
    m.second_order = true;
    m.values = m.values.cwiseAbs();
    m.values = (m.values + m.values.transpose().eval()).eval();
    const auto path = tmpdir() / "g2.csv";
    io::write_map_csv(path.string(), m);
    CHECK(first_line(path) == "t,tau,value");
    const auto r = io::read_map_csv(path.string(), true);
    REQUIRE(r.t.size() == n);
    CHECK((r.values.real() - m.values.real()).cwiseAbs().maxCoeff() < 1e-9);
  }
  SUBCASE("G1 (complex values)") {
    m.second_order = false;
    const auto path = tmpdir() / "g1.csv";
    io::write_map_csv(path.string(), m);
    CHECK(first_line(path) == "t,tau,re,im");
    const auto r = io::read_map_csv(path.string(), false);
    CHECK((r.values - m.values).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("spectral and envelope writers emit the documented headers") {
  pulse::FrequencyGrid fg{5.0, 11};
  pulse::SpectralAmplitude g{fg, Eigen::VectorXcd::Ones(fg.n)};
  const auto sp = tmpdir() / "g.csv";
  io::write_spectral_csv(sp.string(), g);
  CHECK(first_line(sp) == "omega,re,im");

  pulse::TwoPhotonSpectrum f{fg, Eigen::MatrixXcd::Identity(fg.n, fg.n)};
  const auto tp = tmpdir() / "f.csv";
  io::write_two_photon_spectrum_csv(tp.string(), f);
  CHECK(first_line(tp) == "omega1,omega2,re,im");

  Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(4, 0.0, 3.0);
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(4);
  const auto ep = tmpdir() / "env.csv";
  io::write_envelope_csv(ep.string(), t, v);
  CHECK(first_line(ep) == "t,re,im");
}
