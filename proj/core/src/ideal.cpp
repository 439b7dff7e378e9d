// SPDX-License-Identifier: Apache-2.0
//
// metaprism -- design and simulation toolkit for frequency-selective
// reflecting metasurfaces
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "metaprism/ideal.hpp"

#include <cmath>
#include <limits>

namespace mtp {

AngleFrequencyMap::AngleFrequencyMap(double theta_m, double theta_M, const BandPlan& band)
    : theta_m_(theta_m), theta_M_(theta_M), band_(band) {
    if (!(theta_m >= -kPi / 2.0 && theta_m < theta_M && theta_M <= kPi / 2.0))
        throw validation_error("angular range requires -pi/2 <= theta_m < theta_M <= pi/2");
    alpha_ = (std::sin(theta_M_) - std::sin(theta_m_)) / band_.width;
    gamma_ = (std::sin(theta_M_) + std::sin(theta_m_)) / 2.0;
}

double AngleFrequencyMap::sine_at(double frequency_hz) const {
    return alpha_ * (frequency_hz - band_.f0) + gamma_;
}

double AngleFrequencyMap::angle_at(double frequency_hz) const {
    double s = sine_at(frequency_hz);
    if (std::abs(s) > 1.0 + 1e-12)
        throw validation_error("frequency maps outside the visible angular range");
    return std::asin(std::clamp(s, -1.0, 1.0));
}

namespace {

double coefficient_wavelength(const BandPlan& band, double f, PhaseModel model) {
    return model == PhaseModel::NarrowbandLambda0 ? band.lambda0() : kSpeedOfLight / f;
}

} // namespace

double ideal_phase(const MtpGeometry& geom, const AngleFrequencyMap& map,
                   const Direction& incidence, double phi, double frequency_hz,
                   int n, double psi0, PhaseModel model) {
    incidence.validate();
    if (n < 0 || n >= geom.element_count())
        throw validation_error("element index out of range");
    double lambda = coefficient_wavelength(map.band(), frequency_hz, model);
    double s = map.sine_at(frequency_hz);
    double u_nu_inc = std::sin(incidence.theta) * std::cos(incidence.phi);
    double u_zeta_inc = std::sin(incidence.theta) * std::sin(incidence.phi);
    double nu_term = 2.0 * kPi * geom.nu_index(n) * geom.delta_nu() / lambda;
    double zeta_term = 2.0 * kPi * geom.zeta_index(n) * geom.delta_zeta() / lambda;
    return -nu_term * (u_nu_inc + s * std::cos(phi))
         - zeta_term * (u_zeta_inc + s * std::sin(phi)) + psi0;
}

IdealPhaseProfile ideal_phase_profile(const MtpGeometry& geom,
                                      const AngleFrequencyMap& map,
                                      const Direction& incidence, double phi,
                                      double psi0, PhaseModel model) {
    const BandPlan& band = map.band();
    IdealPhaseProfile profile;
    profile.psi.resize(band.samples, geom.element_count());
    profile.psi0 = psi0;
    profile.incidence = incidence;
    for (int k = 0; k < band.samples; ++k)
        for (int n = 0; n < geom.element_count(); ++n)
            profile.psi(k, n) = ideal_phase(geom, map, incidence, phi,
                                            band.frequency(k), n, psi0, model);
    return profile;
}

double ideal_reactance(double psi, double z0) {
    if (z0 <= 0.0) throw validation_error("reference impedance must be positive");
    double r = std::remainder(psi, 2.0 * kPi); // (-pi, pi]
    if (r == 0.0) return std::numeric_limits<double>::infinity();
    return z0 * std::tan((kPi - r) / 2.0);
}

cplx reflection_coefficient(double reactance, double z0) {
    if (z0 <= 0.0) throw validation_error("reference impedance must be positive");
    if (std::isinf(reactance)) return {1.0, 0.0};
    cplx jx{0.0, reactance};
    return (jx - z0) / (jx + z0);
}

cplx ideal_channel_gain(const MtpGeometry& geom, const Eigen::VectorXcd& gamma_diag,
                        const Direction& incidence, const Direction& dir,
                        double frequency_hz, double gain) {
    if (gamma_diag.size() != geom.element_count())
        throw validation_error("reflection coefficient vector size mismatch");
    Eigen::VectorXcd a_in = array_response(geom, incidence, frequency_hz);
    Eigen::VectorXcd a_out = array_response(geom, dir, frequency_hz);
    cplx h = 0.0;
    for (int n = 0; n < geom.element_count(); ++n)
        h += a_out[n] * gamma_diag[n] * a_in[n];
    return gain * h;
}

double frequency_response_at_beam(const MtpGeometry& geom, const AngleFrequencyMap& map,
                                  double delta_f_hz, double phi) {
    if (std::abs(delta_f_hz) >= map.band().width)
        throw validation_error("frequency offset exceeds the band width");
    double lambda0 = map.band().lambda0();
    double u = kPi * map.alpha() * geom.delta_nu() * delta_f_hz * std::cos(phi) / lambda0;
    double v = kPi * map.alpha() * geom.delta_zeta() * delta_f_hz * std::sin(phi) / lambda0;
    auto dirichlet = [](double x, int m) {
        if (std::abs(x) < 1e-9) return 1.0 - (m * m - 1.0) * x * x / 6.0;
        return std::sin(m * x) / (m * std::sin(x));
    };
    return dirichlet(u, geom.count_nu()) * dirichlet(v, geom.count_zeta());
}

BandwidthReport bandwidth(const MtpGeometry& geom, const AngleFrequencyMap& map,
                          double omega, double phi) {
    if (!(omega > 0.0 && omega < 1.0))
        throw validation_error("droop fraction must lie in (0, 1)");
    double lambda0 = map.band().lambda0();
    double alpha = map.alpha();
    BandwidthReport report;
    report.omega = omega;
    report.approx_hz = std::sqrt(6.0 * omega) * 2.0 * lambda0 /
                       (kPi * geom.count_nu() * geom.delta_nu() * alpha);

    double inf = std::numeric_limits<double>::infinity();
    double null_nu = std::abs(std::cos(phi)) > 1e-12
        ? lambda0 / (geom.count_nu() * alpha * geom.delta_nu() * std::abs(std::cos(phi))) : inf;
    double null_zeta = std::abs(std::sin(phi)) > 1e-12
        ? lambda0 / (geom.count_zeta() * alpha * geom.delta_zeta() * std::abs(std::sin(phi))) : inf;
    report.first_null_hz = std::min(null_nu, null_zeta);
    if (!std::isfinite(report.first_null_hz))
        throw numerical_error("beam has no in-band null; bandwidth root not bracketed");

    double target = 1.0 - omega;
    auto resp = [&](double df) { return frequency_response_at_beam(geom, map, df, phi); };
    double lo = 0.0, hi = std::min(report.first_null_hz, map.band().width * 0.499);
    if (resp(hi) > target)
        throw numerical_error("bandwidth root not bracketed within the main lobe");
    while (hi - lo > 1e-3) {
        double mid = (lo + hi) / 2.0;
        (resp(mid) > target ? lo : hi) = mid;
    }
    report.exact_hz = lo + hi; // 2 * delta_f at the droop point
    return report;
}

} // namespace mtp
