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

#include "metaprism/dipole.hpp"

#include <cmath>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_sf_expint.h>

namespace mtp {

namespace {

struct GslQuietInit {
    GslQuietInit() { gsl_set_error_handler_off(); }
};
const GslQuietInit gsl_quiet_init;

// Exponential integral of an imaginary argument, E1(j*x) for x > 0.
cplx e1_imag(double x) {
    if (x < 1e-300) x = 1e-300;
    return {-gsl_sf_Ci(x), gsl_sf_Si(x) - kPi / 2.0};
}

// Antiderivative-based segment integrals of exp(-jkR)/R against exp(-/+jkz),
// with R(z) = sqrt(rho^2 + (z - c)^2).
class SegmentIntegrals {
public:
    SegmentIntegrals(double k, double rho) : k_(k), rho_(rho) {}

    cplx against_neg(double c, double z1, double z2) const {
        return -std::polar(1.0, -k_ * c) * (e1_plus(z2 - c) - e1_plus(z1 - c));
    }
    cplx against_pos(double c, double z1, double z2) const {
        return std::polar(1.0, k_ * c) * (e1_minus(z2 - c) - e1_minus(z1 - c));
    }

private:
    cplx e1_plus(double u) const { return e1_imag(k_ * (radial(u) + u)); }
    cplx e1_minus(double u) const { return e1_imag(k_ * (radial(u) - u)); }
    double radial(double u) const { return std::sqrt(rho_ * rho_ + u * u); }

    double k_, rho_;
};

} // namespace

void DipoleSpec::validate() const {
    if (length <= 0.0 || radius <= 0.0)
        throw validation_error("dipole length and radius must be positive");
    if (radius / length >= 0.05)
        throw validation_error("thin-wire model requires radius/length < 0.05");
}

cplx mutual_impedance_parallel(const DipoleSpec& spec, double rho, double offset,
                               double frequency_hz) {
    spec.validate();
    if (frequency_hz <= 0.0) throw validation_error("frequency must be positive");
    // The field of the source filament is evaluated at least one wire radius
    // away; this also makes the collinear (rho = 0) case the field on the
    // wire surface, exactly as in the self-impedance computation.
    double rho_eff = std::max(rho, spec.radius);
    double k = 2.0 * kPi * frequency_hz / kSpeedOfLight;
    double arm = spec.length / 2.0;
    double h = offset;

    SegmentIntegrals seg(k, rho_eff);
    const double c_terms[3] = {arm, -arm, 0.0};
    const double w_terms[3] = {1.0, 1.0, -2.0 * std::cos(k * arm)};

    cplx acc = 0.0;
    const cplx half_over_j{0.0, -0.5}; // 1/(2j)
    for (int t = 0; t < 3; ++t) {
        double c = c_terms[t];
        // upper half of the observation dipole: current sin(k(arm + h - z))
        cplx upper = half_over_j * (std::polar(1.0, k * (arm + h)) * seg.against_neg(c, h, h + arm)
                                  - std::polar(1.0, -k * (arm + h)) * seg.against_pos(c, h, h + arm));
        // lower half: current sin(k(arm - h + z))
        cplx lower = half_over_j * (std::polar(1.0, k * (arm - h)) * seg.against_pos(c, h - arm, h)
                                  - std::polar(1.0, -k * (arm - h)) * seg.against_neg(c, h - arm, h));
        acc += w_terms[t] * (upper + lower);
    }
    cplx z_max = cplx{0.0, kFreeSpaceImpedance / (4.0 * kPi)} * acc;
    double feed = std::sin(k * arm);
    if (std::abs(feed) < 1e-9)
        throw numerical_error("dipole length is an integer wavelength: feed current vanishes");
    return z_max / (feed * feed);
}

cplx self_impedance(const DipoleSpec& spec, double frequency_hz) {
    return mutual_impedance_parallel(spec, spec.radius, 0.0, frequency_hz);
}

cplx mutual_impedance(const DipoleSpec& spec, const Eigen::Vector3d& p_a,
                      const Eigen::Vector3d& p_b, double frequency_hz) {
    spec.validate();
    Eigen::Vector3d d = p_b - p_a;
    double rho = std::hypot(d.x(), d.y());
    if (d.norm() == 0.0) throw validation_error("mutual impedance requires distinct positions");
    if (rho < 2.0 * spec.radius && std::abs(d.z()) < spec.length)
        throw validation_error("dipole wire volumes overlap");
    return mutual_impedance_parallel(spec, rho, d.z(), frequency_hz);
}

} // namespace mtp
