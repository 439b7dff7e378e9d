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

#include "metaprism/dipole.hpp"
#include "metaprism/geometry.hpp"

namespace mtp {

/// Unit propagation vector: elevation measured from the surface normal
/// (x axis), azimuth in the surface plane from the y axis.
Eigen::Vector3d unit_vector(const Direction& dir);

/// Point at the given distance from the surface center along a direction.
Eigen::Vector3d radial_position(const Direction& dir, double distance_m);

/// Z parameters of the transmitter + surface + receiver dipole ensemble.
/// Ports are ordered (TX, element 0 .. N-1, RX).
struct ImpedanceMatrix {
    Eigen::MatrixXcd z;
    int element_count = 0;
    double frequency_hz = 0.0;
};

ImpedanceMatrix build_impedance_matrix(const MtpGeometry& geom, const DipoleSpec& spec,
                                       const Eigen::Vector3d& tx_pos,
                                       const Eigen::Vector3d& rx_pos,
                                       double frequency_hz);

/// Scattering description of the link, partitioned into the structural
/// TX-to-RX path, the element access vectors and the element-to-element
/// coupling block.
struct MultiportNetwork {
    cplx s_rt{0.0, 0.0};
    Eigen::RowVectorXcd s_rm; // 1 x N, surface to RX
    Eigen::VectorXcd s_mt;    // N x 1, TX to surface
    Eigen::MatrixXcd s_ss;    // N x N, mutual coupling
    double z0 = 50.0;
    double frequency_hz = 0.0;

    int element_count() const { return static_cast<int>(s_mt.size()); }

    /// Degeneration switches for model studies.
    MultiportNetwork without_coupling() const;
    MultiportNetwork without_structural() const;
};

/// S = (Z + Z0 I)^-1 (Z - Z0 I) and its inverse map.
Eigen::MatrixXcd z_to_s(const Eigen::MatrixXcd& z, double z0);
Eigen::MatrixXcd s_to_z(const Eigen::MatrixXcd& s, double z0);

MultiportNetwork z_to_s_partition(const ImpedanceMatrix& zm, double z0);

/// Channel gain of the surface loaded with reflection coefficients gamma:
/// h = s_RT + s_RM (Gamma^-1 - S_SS)^-1 s_MT. Entries of gamma must be
/// unit modulus (reactive loads).
cplx realistic_channel(const MultiportNetwork& net, const Eigen::VectorXcd& gamma);

} // namespace mtp
