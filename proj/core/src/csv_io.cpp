#include "biphoton/csv_io.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace biphoton::io {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.precision(12);
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  return f;
}

std::vector<double> split_row(const std::string& line) {
  std::vector<double> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

}  // namespace

void write_series_csv(const std::string& path, const ObservableSeries& s) {
  auto f = open_out(path);
  f << "t,n_in,n_tls,n_t,n_tt\n";
  for (int i = 0; i < s.t.size(); ++i)
    f << s.t[i] << ',' << s.n_in[i] << ',' << s.n_tls[i] << ',' << s.n_t[i] << ',' << s.n_tt[i]
      << '\n';
}

ObservableSeries read_series_csv(const std::string& path) {
  auto f = open_in(path);
  std::string line;
  std::getline(f, line);  // header
  std::vector<std::array<double, 5>> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    auto v = split_row(line);
    if (v.size() != 5) throw std::runtime_error("bad series row in " + path);
    rows.push_back({v[0], v[1], v[2], v[3], v[4]});
  }
  ObservableSeries s;
  const int n = static_cast<int>(rows.size());
  s.t.resize(n);
  s.n_in.resize(n);
  s.n_tls.resize(n);
  s.n_t.resize(n);
  s.n_tt.resize(n);
  for (int i = 0; i < n; ++i) {
    s.t[i] = rows[i][0];
    s.n_in[i] = rows[i][1];
    s.n_tls[i] = rows[i][2];
    s.n_t[i] = rows[i][3];
    s.n_tt[i] = rows[i][4];
  }
  return s;
}

void write_map_csv(const std::string& path, const CorrelationMap& m) {
  auto f = open_out(path);
  f << (m.second_order ? "t,tau,value\n" : "t,tau,re,im\n");
  const int n = static_cast<int>(m.t.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      f << m.t[i] << ',' << (m.t[j] - m.t[i]);
      if (m.second_order)
        f << ',' << m.values(i, j).real() << '\n';
      else
        f << ',' << m.values(i, j).real() << ',' << m.values(i, j).imag() << '\n';
    }
}

CorrelationMap read_map_csv(const std::string& path, bool second_order) {
  auto f = open_in(path);
  std::string line;
  std::getline(f, line);
  struct Row {
    double t, tj;
    std::complex<double> v;
  };
  std::vector<Row> rows;
  std::map<double, int> tvals;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    auto v = split_row(line);
    if (v.size() != (second_order ? 3u : 4u)) throw std::runtime_error("bad map row in " + path);
    Row r{v[0], v[0] + v[1], second_order ? std::complex<double>(v[2], 0.0)
                                          : std::complex<double>(v[2], v[3])};
    rows.push_back(r);
    tvals.emplace(r.t, 0);
  }
  int idx = 0;
  for (auto& kv : tvals) kv.second = idx++;
  CorrelationMap m;
  m.second_order = second_order;
  m.t.resize(idx);
  for (const auto& kv : tvals) m.t[kv.second] = kv.first;
  m.values.setZero(idx, idx);
  const double tol = idx > 1 ? 1e-9 * (m.t[1] - m.t[0]) : 1e-12;
  for (const auto& r : rows) {
    const auto it = tvals.find(r.t);
    auto jt = tvals.lower_bound(r.tj - tol);
    if (it == tvals.end() || jt == tvals.end() || std::abs(jt->first - r.tj) > 1e-6)
      throw std::runtime_error("map grid in " + path + " is not square");
    m.values(it->second, jt->second) = r.v;
  }
  return m;
}

void write_spectral_csv(const std::string& path, const pulse::SpectralAmplitude& g) {
  auto f = open_out(path);
  f << "omega,re,im\n";
  for (int k = 0; k < g.grid.n; ++k)
    f << g.grid.omega(k) << ',' << g.values[k].real() << ',' << g.values[k].imag() << '\n';
}

void write_two_photon_spectrum_csv(const std::string& path, const pulse::TwoPhotonSpectrum& s) {
  auto f = open_out(path);
  f << "omega1,omega2,re,im\n";
  for (int i = 0; i < s.grid.n; ++i)
    for (int j = 0; j < s.grid.n; ++j)
      f << s.grid.omega(i) << ',' << s.grid.omega(j) << ',' << s.values(i, j).real() << ','
        << s.values(i, j).imag() << '\n';
}

void write_envelope_csv(const std::string& path, const Eigen::VectorXd& t,
                        const Eigen::VectorXcd& values) {
  auto f = open_out(path);
  f << "t,re,im\n";
  for (int i = 0; i < t.size(); ++i)
    f << t[i] << ',' << values[i].real() << ',' << values[i].imag() << '\n';
}

}  // namespace biphoton::io
