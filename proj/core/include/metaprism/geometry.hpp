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
#include <vector>

#include "metaprism/common.hpp"

namespace mtp {

/// Plane-wave direction: elevation measured from the surface normal,
/// azimuth from the first in-plane axis.
struct Direction {
    double theta = 0.0; // rad, [-pi/2, pi/2]
    double phi = 0.0;   // rad, [0, 2*pi)

    void validate() const;
};

enum class Axis { X = 0, Y = 1, Z = 2 };

/// Rectangular grid of scattering elements. Element n (0-based) sits at
/// column nu_n = n mod I along the first axis and row zeta_n = n div I
/// along the second. The grid is centered on the origin.
class MtpGeometry {
public:
    MtpGeometry(int i, int j, double delta_nu, double delta_zeta,
                Axis axis_nu = Axis::Y, Axis axis_zeta = Axis::Z);

    int count_nu() const { return i_; }
    int count_zeta() const { return j_; }
    int element_count() const { return i_ * j_; }
    double delta_nu() const { return delta_nu_; }
    double delta_zeta() const { return delta_zeta_; }
    Axis axis_nu() const { return axis_nu_; }
    Axis axis_zeta() const { return axis_zeta_; }

    int nu_index(int n) const { return n % i_; }
    int zeta_index(int n) const { return n / i_; }

    /// Lower-left element position (smallest nu/zeta coordinates).
    Eigen::Vector3d origin() const { return p0_; }

    Eigen::Vector3d position(int n) const;

    /// In-plane (nu, zeta) coordinates of element n, relative to the grid center.
    Eigen::Vector2d planar_position(int n) const;

private:
    int i_, j_;
    double delta_nu_, delta_zeta_;
    Axis axis_nu_, axis_zeta_;
    Eigen::Vector3d p0_;
};

/// Uniformly sampled operating band around the carrier f0.
struct BandPlan {
    double f0 = 0.0; // Hz
    double width = 0.0; // Hz
    int samples = 2;

    BandPlan() = default;
    BandPlan(double f0_hz, double w_hz, int k);

    double lambda0() const { return kSpeedOfLight / f0; }
    double low() const { return f0 - width / 2.0; }
    double high() const { return f0 + width / 2.0; }
    double frequency(int k) const; // k in [0, samples)
    std::vector<double> frequencies() const;
};

/// Transverse wavenumber of a plane wave in the surface plane:
/// (2*pi/lambda) * [sin(theta)cos(phi), sin(theta)sin(phi)].
Eigen::Vector2d wavenumber(const Direction& dir, double frequency_hz);

/// Per-element phase factors exp(j k.p_n); every entry has unit modulus.
Eigen::VectorXcd array_response(const MtpGeometry& geom, const Direction& dir,
                                double frequency_hz);

} // namespace mtp
