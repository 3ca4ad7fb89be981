#pragma once

#include <Eigen/Dense>
#include <string>

#include "biphoton/observables.hpp"
#include "biphoton/spectrum.hpp"

namespace biphoton::io {

/// `t,n_in,n_tls,n_t,n_tt`
void write_series_csv(const std::string& path, const ObservableSeries& s);
ObservableSeries read_series_csv(const std::string& path);

/// Long format over (t, tau = t_j - t_i): `t,tau,value` for G2,
/// `t,tau,re,im` for G1.
void write_map_csv(const std::string& path, const CorrelationMap& m);
CorrelationMap read_map_csv(const std::string& path, bool second_order);

/// `omega,re,im`
void write_spectral_csv(const std::string& path, const pulse::SpectralAmplitude& g);
/// `omega1,omega2,re,im`
void write_two_photon_spectrum_csv(const std::string& path, const pulse::TwoPhotonSpectrum& f);
/// `t,re,im`
void write_envelope_csv(const std::string& path, const Eigen::VectorXd& t,
                        const Eigen::VectorXcd& values);

}  // namespace biphoton::io
