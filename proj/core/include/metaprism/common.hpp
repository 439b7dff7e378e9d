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

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace mtp {

using cplx = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0; // m/s, exact
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kFreeSpaceImpedance = 4.0e-7 * kPi * kSpeedOfLight; // ~376.73 ohm

/// Bad or inconsistent user input (CLI exit code 2).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: singular matrix, non-bracketed root, ... (CLI exit code 3).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// A circuit that cannot be realized with positive L/C values (CLI exit code 4).
class synthesis_error : public std::runtime_error {
public:
    explicit synthesis_error(const std::string& what) : std::runtime_error(what) {}
};

inline double dbm_to_watt(double dbm) { return 1.0e-3 * std::pow(10.0, dbm / 10.0); }

inline double power_to_db(double p) {
    // 10*log10 of a squared magnitude, floored so that exact zeros stay plottable
    if (p <= 1.0e-20) return -200.0;
    return 10.0 * std::log10(p);
}

} // namespace mtp
