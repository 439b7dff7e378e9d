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

#include <iosfwd>
#include <string>

#include "metaprism/multiport.hpp"

namespace mtp {

/// Partitioned network blocks as CSV (block, row, col, re, im). The header
/// carries z0, frequency and the element count. Round-trips exactly at
/// 17 significant digits.
void write_network_csv(std::ostream& out, const MultiportNetwork& net);
void write_network_csv(const std::string& path, const MultiportNetwork& net);
MultiportNetwork read_network_csv(std::istream& in);
MultiportNetwork read_network_csv(const std::string& path);

/// Single-frequency Touchstone-style export of a full square S matrix
/// (real/imaginary pairs, # Hz S RI R z0). Lets externally computed
/// scattering data replace the built-in dipole model.
void write_touchstone(std::ostream& out, const Eigen::MatrixXcd& s, double frequency_hz,
                      double z0);
void write_touchstone(const std::string& path, const Eigen::MatrixXcd& s,
                      double frequency_hz, double z0);

struct TouchstoneData {
    Eigen::MatrixXcd s;
    double frequency_hz = 0.0;
    double z0 = 50.0;
};

TouchstoneData read_touchstone(std::istream& in);
TouchstoneData read_touchstone(const std::string& path);

/// Interpret a full (N+2)-port scattering matrix, ports ordered
/// (TX, element 0 .. N-1, RX), as the partitioned network.
MultiportNetwork partition_scattering(const Eigen::MatrixXcd& s, double z0,
                                      double frequency_hz);

} // namespace mtp
