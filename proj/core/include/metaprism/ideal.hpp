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

#include <Eigen/Dense>

#include "metaprism/geometry.hpp"

namespace mtp {

/// Phase-coefficient evaluation mode. The narrowband mode evaluates every
/// wavelength-dependent coefficient at the carrier wavelength, which keeps the
/// reflection phase exactly affine in frequency (and hence implementable with
/// a Foster load). The exact mode uses lambda = c/f and exists for error
/// studies only.
enum class PhaseModel { NarrowbandLambda0, ExactLambda };

/// Monotone map from in-band frequency to reflection elevation:
/// theta(f) = asin(alpha*(f - f0) + gamma).
class AngleFrequencyMap {
public:
    AngleFrequencyMap(double theta_m, double theta_M, const BandPlan& band);

    double theta_min() const { return theta_m_; }
    double theta_max() const { return theta_M_; }
    double alpha() const { return alpha_; }     // 1/Hz
    double gamma() const { return gamma_; }     // dimensionless
    const BandPlan& band() const { return band_; }

    /// sin(theta(f)) = alpha*(f - f0) + gamma; defined also slightly out of band.
    double sine_at(double frequency_hz) const;

    /// theta(f); throws out-of-band if |sin| would exceed one.
    double angle_at(double frequency_hz) const;

private:
    double theta_m_, theta_M_;
    double alpha_, gamma_;
    BandPlan band_;
};

/// Target reflection phase of element n for incidence theta_inc and common
/// reflection azimuth phi. Unwrapped (not reduced mod 2*pi).
double ideal_phase(const MtpGeometry& geom, const AngleFrequencyMap& map,
                   const Direction& incidence, double phi, double frequency_hz,
                   int n, double psi0 = 0.0,
                   PhaseModel model = PhaseModel::NarrowbandLambda0);

/// K x N matrix of target phases over the band samples.
struct IdealPhaseProfile {
    Eigen::MatrixXd psi;  // K x N, radians, unwrapped
    double psi0 = 0.0;
    Direction incidence;
};

IdealPhaseProfile ideal_phase_profile(const MtpGeometry& geom,
                                      const AngleFrequencyMap& map,
                                      const Direction& incidence, double phi,
                                      double psi0 = 0.0,
                                      PhaseModel model = PhaseModel::NarrowbandLambda0);

/// Load reactance realizing a given reflection phase at reference impedance Z0:
/// X = Z0 * tan((pi - psi)/2). Returns +/-infinity at the open-circuit phases
/// (psi = 0 mod 2*pi) instead of throwing.
double ideal_reactance(double psi, double z0);

/// Gamma = (jX - Z0)/(jX + Z0); an infinite reactance maps to +1.
cplx reflection_coefficient(double reactance, double z0);

/// Far-field two-hop gain h = a(dir)^T diag(gamma) a(inc). `frequency_hz`
/// fixes the wavelength of both array responses; the narrowband design
/// evaluates it at the carrier. `gain` is the optional scalar link gain
/// (g_rm * g_mt), one by default.
cplx ideal_channel_gain(const MtpGeometry& geom, const Eigen::VectorXcd& gamma_diag,
                        const Direction& incidence, const Direction& dir,
                        double frequency_hz, double gain = 1.0);

/// Normalized frequency response of a beam, i.e. h(theta_k, f_k + df)/h_M(k):
/// a product of two Dirichlet kernels, equal to 1 at df = 0 and independent of
/// f_k. Removable singularities are evaluated by limit.
double frequency_response_at_beam(const MtpGeometry& geom, const AngleFrequencyMap& map,
                                  double delta_f_hz, double phi);

struct BandwidthReport {
    double exact_hz = 0.0;       // root of |response|^2 = (1-omega)^2
    double approx_hz = 0.0;      // third-order Taylor closed form
    double omega = 0.0;
    double first_null_hz = 0.0;
};

/// Beam bandwidth at droop fraction omega in (0, 1).
BandwidthReport bandwidth(const MtpGeometry& geom, const AngleFrequencyMap& map,
                          double omega, double phi);

} // namespace mtp
