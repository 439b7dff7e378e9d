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

#include "metaprism/ideal.hpp"

namespace mtp {

/// Anti-resonance plan of one element load. Poles sit where the target
/// reflection phase crosses a multiple of 2*pi; when no crossing falls
/// inside the band, the two nearest out-of-band crossings are used so the
/// fit basis still brackets the band. An element whose target phase has no
/// frequency slope gets a degenerate single-section plan.
struct PolePlan {
    int element = 0;
    std::vector<int> wrap_index;    // integer wrap count per pole
    std::vector<double> poles_hz;   // strictly increasing
    bool degenerate = false;

    int in_band_count(const BandPlan& band) const;
};

/// Lower bound on the number of in-band anti-resonances the load of
/// element n must exhibit.
int pole_count_bound(const MtpGeometry& geom, const AngleFrequencyMap& map, int n);

PolePlan plan_poles(const MtpGeometry& geom, const AngleFrequencyMap& map,
                    const Direction& incidence, double phi, int n, double psi0 = 0.0);

/// Reactance basis function of one anti-resonance: 2*pi*f / (1 - (f/fp)^2).
double reactance_basis(double pole_hz, double f);
Eigen::VectorXd reactance_basis(const PolePlan& plan, double f);

/// One parallel-LC section of a series Foster chain.
struct FosterSection {
    double l_henry = 0.0;
    double c_farad = 0.0;

    double resonance_hz() const;
};

struct FosterCircuit {
    int element = 0;
    std::vector<FosterSection> sections;
    bool realizable = true; // false when the fit produced a negative inductance

    void require_realizable() const; // throws synthesis_error otherwise
};

struct FitOptions {
    int grid_points = 201;         // fit frequency grid over the band
    double mask_halfwidth_hz = 0;  // <= 0 selects a quarter of the 5% droop bandwidth
    double z0 = 50.0;
};

/// Least-squares fit of the section inductances against the ideal target
/// reactance of element n, excluding samples near the planned poles.
FosterCircuit fit_inductances(const MtpGeometry& geom, const AngleFrequencyMap& map,
                              const Direction& incidence, double phi,
                              const PolePlan& plan, const FitOptions& options = {});

/// Weighted least-squares core of fit_inductances: solves for the section
/// inductances against arbitrary reactance samples. Data generated by a
/// circuit with the planned poles is recovered exactly.
FosterCircuit fit_sections(const PolePlan& plan, const std::vector<double>& grid_hz,
                           const std::vector<double>& target_ohm, double z0);

/// Series-chain reactance; diverges at the section resonances.
double realized_reactance(const FosterCircuit& circuit, double f);

/// Default pole-adjacent mask half-width used when FitOptions leaves it unset.
double default_mask_halfwidth(const MtpGeometry& geom, const AngleFrequencyMap& map);

} // namespace mtp
