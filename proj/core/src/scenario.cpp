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

#include "metaprism/scenario.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace mtp {

void Scenario::validate() const {
    if (f0_hz <= 0.0 || bandwidth_hz <= 0.0)
        throw validation_error("carrier and bandwidth must be positive");
    if (!(theta_min_rad < theta_max_rad))
        throw validation_error("angular range requires theta_min < theta_max");
    if (theta_min_rad < -kPi / 2.0 || theta_max_rad > kPi / 2.0)
        throw validation_error("angular range outside [-pi/2, pi/2]");
    incidence().validate();
    if (count_nu < 1 || count_zeta < 1)
        throw validation_error("element counts must be positive");
    if (spacing_nu_lambda <= 0.0 || spacing_zeta_lambda <= 0.0)
        throw validation_error("element spacings must be positive");
    if (tx_distance_m <= 0.0 || rx_distance_m <= 0.0)
        throw validation_error("link distances must be positive");
    if (z0_ohm <= 0.0) throw validation_error("reference impedance must be positive");
    if (!(droop > 0.0 && droop < 1.0))
        throw validation_error("droop fraction must lie in (0, 1)");
    if (users < 0) throw validation_error("user count must be non-negative");
    dipole().validate();
}

MtpGeometry Scenario::geometry() const {
    return MtpGeometry(count_nu, count_zeta, spacing_nu_lambda * lambda0(),
                       spacing_zeta_lambda * lambda0());
}

BandPlan Scenario::band(int samples) const {
    return BandPlan(f0_hz, bandwidth_hz, samples);
}

AngleFrequencyMap Scenario::mapping(int samples) const {
    return AngleFrequencyMap(theta_min_rad, theta_max_rad, band(samples));
}

DipoleSpec Scenario::dipole() const {
    return {dipole_length_lambda * lambda0(), dipole_radius_lambda * lambda0()};
}

int Scenario::user_count() const {
    if (users > 0) return users;
    MtpGeometry geom = geometry();
    AngleFrequencyMap map = mapping(2);
    double droop_bw = std::sqrt(6.0 * droop) * 2.0 * lambda0() /
                      (kPi * geom.count_nu() * geom.delta_nu() * map.alpha());
    int k = static_cast<int>(std::ceil(bandwidth_hz / droop_bw));
    return std::max(k, 2);
}

namespace {

void apply_key(Scenario& sc, const std::string& key, const std::string& value,
               bool& spacing_nu_overridden) {
    auto num = [&value, &key]() {
        try {
            std::size_t pos = 0;
            double v = std::stod(value, &pos);
            while (pos < value.size() && std::isspace(static_cast<unsigned char>(value[pos])))
                ++pos;
            if (pos != value.size()) throw std::invalid_argument(value);
            return v;
        } catch (const std::exception&) {
            throw validation_error("bad numeric value for " + key + ": " + value);
        }
    };
    auto integer = [&num]() { return static_cast<int>(std::llround(num())); };
    auto flag = [&value, &key]() {
        if (value == "true" || value == "1") return true;
        if (value == "false" || value == "0") return false;
        throw validation_error("bad boolean value for " + key + ": " + value);
    };

    if (key == "f0_hz") sc.f0_hz = num();
    else if (key == "bandwidth_hz") sc.bandwidth_hz = num();
    else if (key == "users") sc.users = integer();
    else if (key == "droop") sc.droop = num();
    else if (key == "theta_min_rad") sc.theta_min_rad = num();
    else if (key == "theta_max_rad") sc.theta_max_rad = num();
    else if (key == "theta_inc_rad") sc.theta_inc_rad = num();
    else if (key == "phi_inc_rad") sc.phi_inc_rad = num();
    else if (key == "phi_rad") sc.phi_rad = num();
    else if (key == "psi0_rad") sc.psi0_rad = num();
    else if (key == "count_nu") sc.count_nu = integer();
    else if (key == "count_zeta") sc.count_zeta = integer();
    else if (key == "spacing_nu_lambda") { sc.spacing_nu_lambda = num(); spacing_nu_overridden = true; }
    else if (key == "spacing_zeta_lambda") sc.spacing_zeta_lambda = num();
    else if (key == "spacing_nu_m") { sc.spacing_nu_lambda = num() / sc.lambda0(); spacing_nu_overridden = true; }
    else if (key == "spacing_zeta_m") sc.spacing_zeta_lambda = num() / sc.lambda0();
    else if (key == "constant_aperture") sc.constant_aperture = flag();
    else if (key == "tx_distance_m") sc.tx_distance_m = num();
    else if (key == "rx_distance_m") sc.rx_distance_m = num();
    else if (key == "tx_power_dbm") sc.tx_power_dbm = num();
    else if (key == "noise_dbm_hz") sc.noise_dbm_hz = num();
    else if (key == "z0_ohm") sc.z0_ohm = num();
    else if (key == "dipole_length_lambda") sc.dipole_length_lambda = num();
    else if (key == "dipole_radius_lambda") sc.dipole_radius_lambda = num();
    else throw validation_error("unknown scenario key: " + key);
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

Scenario load_scenario(std::istream& in) {
    Scenario sc;
    double base_aperture = sc.count_nu * sc.spacing_nu_lambda;
    bool spacing_nu_overridden = false;
    bool count_nu_overridden = false;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') continue; // section header
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw validation_error("scenario line " + std::to_string(lineno) +
                                   " is not key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "count_nu") count_nu_overridden = true;
        apply_key(sc, key, value, spacing_nu_overridden);
        if (key == "count_nu" || key == "spacing_nu_lambda" || key == "spacing_nu_m")
            if (count_nu_overridden) base_aperture = sc.count_nu * sc.spacing_nu_lambda;
    }
    // constant aperture: a spacing override rescales the element count so
    // count_nu * spacing stays at the default (or explicitly set) aperture
    if (sc.constant_aperture && spacing_nu_overridden && !count_nu_overridden)
        sc.count_nu = static_cast<int>(std::llround(base_aperture / sc.spacing_nu_lambda));
    sc.validate();
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open scenario file: " + path);
    return load_scenario(in);
}

void write_scenario(std::ostream& out, const Scenario& sc) {
    out << std::setprecision(17);
    out << "f0_hz = " << sc.f0_hz << '\n'
        << "bandwidth_hz = " << sc.bandwidth_hz << '\n'
        << "users = " << sc.user_count() << '\n'
        << "droop = " << sc.droop << '\n'
        << "theta_min_rad = " << sc.theta_min_rad << '\n'
        << "theta_max_rad = " << sc.theta_max_rad << '\n'
        << "theta_inc_rad = " << sc.theta_inc_rad << '\n'
        << "phi_inc_rad = " << sc.phi_inc_rad << '\n'
        << "phi_rad = " << sc.phi_rad << '\n'
        << "psi0_rad = " << sc.psi0_rad << '\n'
        << "count_nu = " << sc.count_nu << '\n'
        << "count_zeta = " << sc.count_zeta << '\n'
        << "spacing_nu_lambda = " << sc.spacing_nu_lambda << '\n'
        << "spacing_zeta_lambda = " << sc.spacing_zeta_lambda << '\n'
        << "constant_aperture = " << (sc.constant_aperture ? "true" : "false") << '\n'
        << "tx_distance_m = " << sc.tx_distance_m << '\n'
        << "rx_distance_m = " << sc.rx_distance_m << '\n'
        << "tx_power_dbm = " << sc.tx_power_dbm << '\n'
        << "noise_dbm_hz = " << sc.noise_dbm_hz << '\n'
        << "z0_ohm = " << sc.z0_ohm << '\n'
        << "dipole_length_lambda = " << sc.dipole_length_lambda << '\n'
        << "dipole_radius_lambda = " << sc.dipole_radius_lambda << '\n';
}

std::string scenario_hash(const Scenario& sc) {
    std::ostringstream echo;
    write_scenario(echo, sc);
    std::string text = echo.str();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

} // namespace mtp
