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

#include <vector>

#include "metaprism/multiport.hpp"
#include "metaprism/ideal.hpp"

namespace mtp {

/// Per-element linear phase law psi_n(f) = alpha_n (f - f0) + gamma_n.
struct PhaseProfile {
    Eigen::VectorXd alpha; // rad/Hz
    Eigen::VectorXd gamma; // rad, kept in [0, 2*pi)

    int element_count() const { return static_cast<int>(alpha.size()); }
    double phase(int n, double f, double f0) const {
        return alpha[n] * (f - f0) + gamma[n];
    }
    /// K x N phase matrix over the band samples.
    Eigen::MatrixXd psi(const BandPlan& band) const;
    /// Unit-modulus reflection coefficients at band sample k.
    Eigen::VectorXcd reflections(const BandPlan& band, int k) const;
};

/// Slopes and offsets of the ideal frequency-selective design.
PhaseProfile ideal_profile(const MtpGeometry& geom, const AngleFrequencyMap& map,
                           const Direction& incidence, double phi, double psi0 = 0.0);

/// Exhaustive search grid for one element's (alpha, gamma) pair. The slope
/// axis spans the signed range of the ideal design slopes.
struct SearchGrid {
    int n_alpha = 300;
    int n_gamma = 100;
    double alpha_min = 0.0; // rad/Hz
    double alpha_max = 0.0;

    static SearchGrid for_design(const MtpGeometry& geom, const AngleFrequencyMap& map,
                                 int n_alpha = 300, int n_gamma = 100);

    double alpha_at(int i) const;
    double gamma_at(int j) const;
    int snap_alpha(double alpha) const;
    int snap_gamma(double gamma) const;
};

struct CapacityReport {
    double capacity_bps = 0.0;
    std::vector<double> rates_bps;   // per user
    std::vector<double> gains;      // per user |h|^2
    std::vector<double> trace_bps;  // objective per outer iteration
    double mu = 0.0;
    int iterations = 0;
    bool converged = true;
    double tx_power_w = 0.0;
    double noise_w_hz = 0.0;
};

/// Full-load equal-power capacity over the K frequency slots. nets[k] is
/// the network seen by user k; psi row k gives the element phases at f_k.
CapacityReport capacity(const std::vector<MultiportNetwork>& nets, const BandPlan& band,
                        const Eigen::MatrixXd& psi, double tx_power_w,
                        double noise_w_hz);

/// Rank-one split of the loaded-network inverse with element n detached.
/// Only the phase psi of element n varies; the inverse is a Moebius
/// function of exp(j psi), published in the normal form
/// (Gamma^-1 - S_SS)^-1 = a - b / (exp(j psi) + c).
struct RankOneSplit {
    Eigen::MatrixXcd a;
    Eigen::MatrixXcd b;
    cplx c;
};

RankOneSplit rank_one_split(const Eigen::VectorXcd& gamma, const Eigen::MatrixXcd& s_ss,
                            int n);

/// Scalar channel of element n as a function of its own phase. Regular
/// detachments give h(psi) = d + f / (exp(j psi) + c); a fully decoupled
/// element (zero coupling row) gives the affine h(psi) = d + f exp(j psi).
struct ElementChannel {
    cplx d, f, c;
    bool affine = false;

    cplx at(cplx unit_gamma) const {
        return affine ? d + f * unit_gamma : d + f / (unit_gamma + c);
    }
};

ElementChannel element_channel(const MultiportNetwork& net, const RankOneSplit& split);

/// Detaches element n at the current loads, selecting the affine form when
/// the rank-one detachment would be singular.
ElementChannel element_channel(const MultiportNetwork& net, const Eigen::VectorXcd& gamma,
                               int n);

struct OptimizeOptions {
    SearchGrid grid;
    double epsilon = 1e-4;
    int max_outer = 50;
};

struct OptimizeResult {
    PhaseProfile profile;
    CapacityReport report;
};

/// Alternating optimization of the linear-phase coefficients, one element
/// at a time over the exhaustive grid. Updates are only accepted when the
/// objective strictly improves, so the trace is non-decreasing.
OptimizeResult optimize(const std::vector<MultiportNetwork>& nets, const BandPlan& band,
                        const PhaseProfile& initial, const OptimizeOptions& options,
                        double tx_power_w, double noise_w_hz);

struct UnconstrainedResult {
    Eigen::MatrixXd psi; // K x N, free per entry
    CapacityReport report;
};

/// Baseline without the linear-phase constraint: every (k, n) phase is
/// optimized independently on the gamma grid.
UnconstrainedResult optimize_unconstrained(const std::vector<MultiportNetwork>& nets,
                                           const BandPlan& band,
                                           const Eigen::MatrixXd& initial_psi,
                                           const OptimizeOptions& options,
                                           double tx_power_w, double noise_w_hz);

} // namespace mtp
