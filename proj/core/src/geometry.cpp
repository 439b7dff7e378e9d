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

#include "metaprism/geometry.hpp"

#include <cmath>

namespace mtp {

void Direction::validate() const {
    if (!std::isfinite(theta) || !std::isfinite(phi))
        throw validation_error("direction angles must be finite");
    if (theta < -kPi / 2.0 - 1e-12 || theta > kPi / 2.0 + 1e-12)
        throw validation_error("elevation out of [-pi/2, pi/2]");
    if (phi < 0.0 || phi >= 2.0 * kPi)
        throw validation_error("azimuth out of [0, 2*pi)");
}

MtpGeometry::MtpGeometry(int i, int j, double delta_nu, double delta_zeta,
                         Axis axis_nu, Axis axis_zeta)
    : i_(i), j_(j), delta_nu_(delta_nu), delta_zeta_(delta_zeta),
      axis_nu_(axis_nu), axis_zeta_(axis_zeta) {
    if (i < 1 || j < 1) throw validation_error("element counts must be positive");
    if (delta_nu <= 0.0 || delta_zeta <= 0.0)
        throw validation_error("element spacings must be positive");
    if (axis_nu == axis_zeta) throw validation_error("grid axes must differ");
    // Center the grid so that the far-field phase reference is the array center.
    p0_ = Eigen::Vector3d::Zero();
    p0_[static_cast<int>(axis_nu_)] = -(i_ - 1) * delta_nu_ / 2.0;
    p0_[static_cast<int>(axis_zeta_)] = -(j_ - 1) * delta_zeta_ / 2.0;
}

Eigen::Vector3d MtpGeometry::position(int n) const {
    Eigen::Vector3d p = p0_;
    p[static_cast<int>(axis_nu_)] += nu_index(n) * delta_nu_;
    p[static_cast<int>(axis_zeta_)] += zeta_index(n) * delta_zeta_;
    return p;
}

Eigen::Vector2d MtpGeometry::planar_position(int n) const {
    return {p0_[static_cast<int>(axis_nu_)] + nu_index(n) * delta_nu_,
            p0_[static_cast<int>(axis_zeta_)] + zeta_index(n) * delta_zeta_};
}

BandPlan::BandPlan(double f0_hz, double w_hz, int k)
    : f0(f0_hz), width(w_hz), samples(k) {
    if (f0 <= 0.0 || width <= 0.0) throw validation_error("band requires f0 > 0 and W > 0");
    if (samples < 2) throw validation_error("band requires at least two samples");
}

double BandPlan::frequency(int k) const {
    return low() + width * static_cast<double>(k) / static_cast<double>(samples - 1);
}

std::vector<double> BandPlan::frequencies() const {
    std::vector<double> f(samples);
    for (int k = 0; k < samples; ++k) f[k] = frequency(k);
    return f;
}

Eigen::Vector2d wavenumber(const Direction& dir, double frequency_hz) {
    dir.validate();
    if (!std::isfinite(frequency_hz) || frequency_hz <= 0.0)
        throw validation_error("frequency must be positive and finite");
    double k = 2.0 * kPi * frequency_hz / kSpeedOfLight;
    double st = std::sin(dir.theta);
    return {k * st * std::cos(dir.phi), k * st * std::sin(dir.phi)};
}

Eigen::VectorXcd array_response(const MtpGeometry& geom, const Direction& dir,
                                double frequency_hz) {
    Eigen::Vector2d k = wavenumber(dir, frequency_hz);
    Eigen::VectorXcd a(geom.element_count());
    for (int n = 0; n < geom.element_count(); ++n) {
        double phase = k.dot(geom.planar_position(n));
        a[n] = std::polar(1.0, phase);
    }
    return a;
}

} // namespace mtp
