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

#include <string>
#include <vector>

#include "metaprism/foster.hpp"
#include "metaprism/optimizer.hpp"
#include "metaprism/scenario.hpp"

namespace mtp {

enum class ProfileSource { Ideal, Foster, File };
enum class OptimizeMode { Constrained, Unconstrained, Both };

struct RunOptions {
    std::string out_dir = ".";
    int angle_points = 1001;
    bool zero_coupling = false;
    bool zero_structural = false;
    bool ideal_model = false;    // bypass the multiport network entirely
    bool per_frequency = false;  // rebuild the network blocks at every f_k
    std::string profile_file;    // ProfileSource::File input (n, alpha, gamma CSV)
    int n_alpha = 300;
    int n_gamma = 100;
    double epsilon = 1e-4;
    int max_outer = 50;
    OptimizeMode mode = OptimizeMode::Both;
    std::uint64_t seed = 1;
};

/// One multiport network per frequency slot; user k sits at distance
/// rx_distance along the mapped angle of f_k. Blocks are evaluated at the
/// carrier unless per_frequency is set.
std::vector<MultiportNetwork> build_user_networks(const Scenario& scenario,
                                                  bool per_frequency = false);

/// Network for a receiver at an arbitrary direction, used for gain maps.
MultiportNetwork build_observer_network(const Scenario& scenario, const Direction& rx_dir,
                                        double frequency_hz);

/// Analytic far-field networks for the ideal surface model: no coupling, no
/// structural scattering, unit-amplitude plane-wave responses at the carrier
/// with free-space link amplitudes. The linear design is exactly optimal on
/// these networks, so an optimizer started from it stays put.
std::vector<MultiportNetwork> build_ideal_networks(const Scenario& scenario);

/// Single ideal-model network for an observer direction.
MultiportNetwork build_ideal_observer_network(const Scenario& scenario,
                                              const Direction& rx_dir);

struct SweepArtifacts {
    std::string gain_map_csv;
    std::string reactance_csv;
    std::string report_json;
    std::string manifest_json;
    BandwidthReport bw;
    std::vector<double> peak_theta_rad; // argmax per frequency slot
};

SweepArtifacts run_ideal_sweep(const Scenario& scenario, const RunOptions& options);

struct SynthesisArtifacts {
    std::vector<std::string> netlist_files;
    std::string circuits_csv;
    std::string report_json;
    std::string manifest_json;
    std::vector<FosterCircuit> circuits;
    std::vector<double> rms_phase_error_rad;     // per element, masked samples
    std::vector<double> rms_reactance_rel_error; // per element, masked samples
    std::vector<int> unrealizable_elements;
};

SynthesisArtifacts run_synthesis(const Scenario& scenario, const RunOptions& options);

struct EvalArtifacts {
    std::string gain_map_csv;
    std::string report_json;
    std::string manifest_json;
    CapacityReport capacity;
    std::vector<double> peak_theta_rad;
};

EvalArtifacts run_realistic_eval(const Scenario& scenario, ProfileSource source,
                                 const RunOptions& options);

struct OptimizeArtifacts {
    std::string profile_csv;
    std::string trace_csv;
    std::string capacity_csv;
    std::string report_json;
    std::string manifest_json;
    CapacityReport non_opt;
    CapacityReport constrained;
    CapacityReport unconstrained;
    PhaseProfile optimized_profile;
};

OptimizeArtifacts run_optimize(const Scenario& scenario, const RunOptions& options);

/// Profile file round trip (CSV: n, alpha_rad_per_hz, gamma_rad).
void write_profile_csv(const std::string& path, const PhaseProfile& profile);
PhaseProfile read_profile_csv(const std::string& path);

} // namespace mtp
