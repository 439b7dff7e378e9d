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

#include "metaprism/dipole.hpp"
#include "metaprism/ideal.hpp"

namespace mtp {

/// Full description of one simulation setup. Defaults describe the
/// reference deployment: a 16 x 4 surface at 3.6 GHz steering a 100 MHz
/// band over [30 deg, 60 deg], broadside feed at 10 m, users at 20 m.
struct Scenario {
    double f0_hz = 3.6e9;
    double bandwidth_hz = 100e6;
    int users = 0; // 0 selects ceil(W / droop bandwidth)
    double droop = 0.05;

    double theta_min_rad = kPi / 6.0;
    double theta_max_rad = kPi / 3.0;
    double theta_inc_rad = 0.0;
    double phi_inc_rad = 0.0;
    double phi_rad = 0.0; // common reflection azimuth
    double psi0_rad = 0.0;

    int count_nu = 16;
    int count_zeta = 4;
    double spacing_nu_lambda = 0.5;    // in carrier wavelengths
    double spacing_zeta_lambda = 0.75;
    bool constant_aperture = false;    // spacing overrides rescale count_nu

    double tx_distance_m = 10.0;
    double rx_distance_m = 20.0;
    double tx_power_dbm = 0.0;
    double noise_dbm_hz = -165.37;
    double z0_ohm = 50.0;

    double dipole_length_lambda = 0.46;
    double dipole_radius_lambda = 1.0 / 500.0;

    void validate() const;

    double lambda0() const { return kSpeedOfLight / f0_hz; }
    MtpGeometry geometry() const;
    BandPlan band(int samples) const;
    AngleFrequencyMap mapping(int samples) const;
    DipoleSpec dipole() const;
    Direction incidence() const { return {theta_inc_rad, phi_inc_rad}; }

    /// Number of frequency slots / users; resolves the automatic choice
    /// from the droop bandwidth.
    int user_count() const;
};

/// Parses a key = value scenario file ('#' and ';' comments, optional
/// [section] headers are ignored). Unknown keys are rejected. Spacings can
/// be given in carrier wavelengths (spacing_nu_lambda) or meters
/// (spacing_nu_m).
Scenario load_scenario(std::istream& in);
Scenario load_scenario_file(const std::string& path);

/// Canonical echo of every resolved parameter, one key = value per line.
void write_scenario(std::ostream& out, const Scenario& scenario);

/// FNV-1a hash of the canonical echo, for run manifests.
std::string scenario_hash(const Scenario& scenario);

} // namespace mtp
