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

#pragma once

#include <cstdint>
#include <functional>

#include "metaprism/ideal.hpp"

namespace mtp {

/// Spatially correlated Rician multipath on the surface-to-receiver link.
/// `gain` is s(theta) on [-pi/2, pi/2]; s^2 is the angular scattering
/// distribution and must integrate to one over that interval.
struct MultipathSpec {
    double kappa = 1.0; // Rician factor, linear
    std::function<double(double)> gain;
    int grid_points = 2001; // quadrature grid (odd, Simpson)

    static MultipathSpec isotropic(double kappa);
    /// von-Mises-shaped angular mass centered on theta0 with concentration c.
    static MultipathSpec von_mises(double kappa, double theta0, double concentration);
    /// Truncated-Gaussian mass of width sigma_rad around theta0.
    static MultipathSpec concentrated(double kappa, double theta0, double sigma_rad);

    /// Integral of s^2 over [-pi/2, pi/2]; 1 within quadrature tolerance
    /// for a valid spec.
    double normalization() const;
};

/// Effective Rician factor of the beam at f_k:
/// kappa_eff = kappa / int s^2(theta) |h(theta,f_k)|^2 / |h_M(k)|^2 dtheta.
/// Always >= kappa.
double effective_rician_factor(const MultipathSpec& spec, const MtpGeometry& geom,
                               const AngleFrequencyMap& map, const Direction& incidence,
                               double f_k);

/// Monte Carlo sampler for the total (LOS + diffuse) beam gain at f_k.
/// The angular sweep is precomputed once so draws are cheap.
class MultipathSampler {
public:
    MultipathSampler(const MultipathSpec& spec, const MtpGeometry& geom,
                     const AngleFrequencyMap& map, const Direction& incidence,
                     double f_k);

    cplx draw(std::uint64_t seed) const;
    cplx los() const { return los_; }
    /// Variance of the diffuse term, equal to the quadrature diffuse power.
    double diffuse_power() const;

private:
    std::vector<cplx> coef_; // sqrt(w_i) s(theta_i) h(theta_i)
    cplx los_;
    double kappa_;
};

/// One Monte Carlo realization of the total (LOS + diffuse) beam gain at f_k.
cplx multipath_channel_draw(const MultipathSpec& spec, const MtpGeometry& geom,
                            const AngleFrequencyMap& map, const Direction& incidence,
                            double f_k, std::uint64_t seed);

/// Quadrature value of the diffuse power integral int s^2 |h|^2 dtheta
/// (unnormalized by kappa); exposed for cross-checking Monte Carlo draws.
double diffuse_power(const MultipathSpec& spec, const MtpGeometry& geom,
                     const AngleFrequencyMap& map, const Direction& incidence,
                     double f_k);

} // namespace mtp
