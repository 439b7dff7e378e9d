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

#include "metaprism/common.hpp"

namespace mtp {

/// Center-fed metallic thin-wire dipole, oriented along the zeta axis (z).
struct DipoleSpec {
    double length = 0.0; // m
    double radius = 0.0; // m

    static DipoleSpec nearly_resonant(double lambda0) {
        return {0.46 * lambda0, lambda0 / 500.0};
    }

    void validate() const;
};

/// Induced-EMF self impedance (sinusoidal current, field evaluated on the
/// wire surface), referred to the feed current.
cplx self_impedance(const DipoleSpec& spec, double frequency_hz);

/// Induced-EMF mutual impedance of two identical parallel z-oriented dipoles
/// at 3D positions p_a, p_b (side-by-side, echelon or collinear), referred to
/// the feed currents.
cplx mutual_impedance(const DipoleSpec& spec, const Eigen::Vector3d& p_a,
                      const Eigen::Vector3d& p_b, double frequency_hz);

/// Core kernel: parallel equal-length dipoles whose centers are separated by
/// `rho` transversally and `offset` axially.
cplx mutual_impedance_parallel(const DipoleSpec& spec, double rho, double offset,
                               double frequency_hz);

} // namespace mtp
