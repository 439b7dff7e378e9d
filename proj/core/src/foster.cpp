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

#include "metaprism/foster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mtp {

namespace {

struct PhaseLine {
    double slope = 0.0;  // d psi / d s(f)
    double offset = 0.0; // psi at s = 0
};

// psi_n(f) = offset + slope * s(f)
PhaseLine phase_line(const MtpGeometry& geom, const AngleFrequencyMap& map,
                     const Direction& incidence, double phi, int n, double psi0) {
    incidence.validate();
    if (n < 0 || n >= geom.element_count())
        throw validation_error("element index out of range");
    double lambda0 = map.band().lambda0();
    double nu_len = geom.nu_index(n) * geom.delta_nu();
    double zeta_len = geom.zeta_index(n) * geom.delta_zeta();
    double u_nu = std::sin(incidence.theta) * std::cos(incidence.phi);
    double u_zeta = std::sin(incidence.theta) * std::sin(incidence.phi);
    PhaseLine line;
    line.slope = -2.0 * kPi * (nu_len * std::cos(phi) + zeta_len * std::sin(phi)) / lambda0;
    line.offset = psi0 - 2.0 * kPi * (nu_len * u_nu + zeta_len * u_zeta) / lambda0;
    return line;
}

double wrap_to_frequency(const PhaseLine& line, const AngleFrequencyMap& map, int kappa) {
    // phase multiple of 2*pi: offset + slope * s = 2*pi*kappa
    double s = (2.0 * kPi * kappa - line.offset) / line.slope;
    return map.band().f0 + (s - map.gamma()) / map.alpha();
}

} // namespace

int PolePlan::in_band_count(const BandPlan& band) const {
    int count = 0;
    for (double f : poles_hz)
        if (f > band.low() && f < band.high()) ++count;
    return count;
}

int pole_count_bound(const MtpGeometry& geom, const AngleFrequencyMap& map, int n) {
    if (n < 0 || n >= geom.element_count())
        throw validation_error("element index out of range");
    double ratio = geom.nu_index(n) * geom.delta_nu() / map.band().lambda0();
    return static_cast<int>(std::floor(
        ratio * (std::sin(map.theta_max()) - std::sin(map.theta_min()))));
}

PolePlan plan_poles(const MtpGeometry& geom, const AngleFrequencyMap& map,
                    const Direction& incidence, double phi, int n, double psi0) {
    PhaseLine line = phase_line(geom, map, incidence, phi, n, psi0);
    PolePlan plan;
    plan.element = n;
    if (std::abs(line.slope) < 1e-12) {
        plan.degenerate = true;
        return plan;
    }
    const BandPlan& band = map.band();
    double k_lo = (line.offset + line.slope * map.sine_at(band.low())) / (2.0 * kPi);
    double k_hi = (line.offset + line.slope * map.sine_at(band.high())) / (2.0 * kPi);
    if (k_lo > k_hi) std::swap(k_lo, k_hi);

    // every in-band anti-resonance plus one bracketing wrap on each side;
    // the brackets are poles of the target reactance too and pin down the
    // fit where the band has no wrap of its own
    int lo = static_cast<int>(std::floor(k_lo));
    if (lo >= k_lo) --lo;
    int hi = static_cast<int>(std::ceil(k_hi));
    if (hi <= k_hi) ++hi;
    --lo;
    ++hi;
    std::vector<int> wraps;
    for (int k = lo; k <= hi; ++k) wraps.push_back(k);
    for (int k : wraps) {
        double f = wrap_to_frequency(line, map, k);
        if (!(f > 0.0))
            throw synthesis_error("planned pole at non-positive frequency for element " +
                                  std::to_string(n));
        plan.wrap_index.push_back(k);
        plan.poles_hz.push_back(f);
    }
    // ascending in frequency
    std::vector<std::size_t> order(plan.poles_hz.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return plan.poles_hz[a] < plan.poles_hz[b];
    });
    PolePlan sorted;
    sorted.element = n;
    for (std::size_t i : order) {
        sorted.wrap_index.push_back(plan.wrap_index[i]);
        sorted.poles_hz.push_back(plan.poles_hz[i]);
    }
    return sorted;
}

double reactance_basis(double pole_hz, double f) {
    if (pole_hz <= 0.0) throw validation_error("pole frequency must be positive");
    double ratio = f / pole_hz;
    return 2.0 * kPi * f / (1.0 - ratio * ratio);
}

Eigen::VectorXd reactance_basis(const PolePlan& plan, double f) {
    Eigen::VectorXd beta(plan.poles_hz.size());
    for (std::size_t p = 0; p < plan.poles_hz.size(); ++p)
        beta[p] = reactance_basis(plan.poles_hz[p], f);
    return beta;
}

double FosterSection::resonance_hz() const {
    if (l_henry * c_farad <= 0.0)
        throw numerical_error("section has no real resonance");
    return 1.0 / (2.0 * kPi * std::sqrt(l_henry * c_farad));
}

void FosterCircuit::require_realizable() const {
    if (!realizable)
        throw synthesis_error("element " + std::to_string(element) +
                              " fit produced a non-positive inductance");
}

double default_mask_halfwidth(const MtpGeometry& geom, const AngleFrequencyMap& map) {
    double droop_bw = std::sqrt(6.0 * 0.05) * 2.0 * map.band().lambda0() /
                      (kPi * geom.count_nu() * geom.delta_nu() * map.alpha());
    return droop_bw / 4.0;
}

namespace {

FosterCircuit constant_reactance_stub(const MtpGeometry& geom, const AngleFrequencyMap& map,
                                      const Direction& incidence, double phi, int n,
                                      const FitOptions& options) {
    double f0 = map.band().f0;
    double psi = ideal_phase(geom, map, incidence, phi, f0, n);
    double x0 = ideal_reactance(psi, options.z0);
    FosterCircuit circ;
    circ.element = n;
    FosterSection section;
    if (std::isinf(x0)) {
        // open circuit: anti-resonance placed on the carrier
        section.l_henry = 1e-6;
        section.c_farad = 1.0 / (section.l_henry * std::pow(2.0 * kPi * f0, 2));
    } else if (x0 > 1e-9) {
        double fp = 2.0 * f0; // inductive branch, pole above band
        section.l_henry = x0 * (1.0 - std::pow(f0 / fp, 2)) / (2.0 * kPi * f0);
        section.c_farad = 1.0 / (section.l_henry * std::pow(2.0 * kPi * fp, 2));
    } else if (x0 < -1e-9) {
        double fp = f0 / 2.0; // capacitive branch, pole below band
        section.l_henry = x0 * (1.0 - std::pow(f0 / fp, 2)) / (2.0 * kPi * f0);
        section.c_farad = 1.0 / (section.l_henry * std::pow(2.0 * kPi * fp, 2));
    } else {
        return circ; // short circuit: empty chain
    }
    circ.sections.push_back(section);
    return circ;
}

} // namespace

FosterCircuit fit_inductances(const MtpGeometry& geom, const AngleFrequencyMap& map,
                              const Direction& incidence, double phi,
                              const PolePlan& plan, const FitOptions& options) {
    if (options.grid_points < 2) throw validation_error("fit grid too small");
    if (plan.degenerate)
        return constant_reactance_stub(geom, map, incidence, phi, plan.element, options);

    const BandPlan& band = map.band();
    double mask = options.mask_halfwidth_hz > 0.0 ? options.mask_halfwidth_hz
                                                  : default_mask_halfwidth(geom, map);
    std::vector<double> grid, target;
    for (int i = 0; i < options.grid_points; ++i) {
        double f = band.low() + band.width * i / (options.grid_points - 1);
        bool masked = false;
        for (double fp : plan.poles_hz)
            if (std::abs(f - fp) < mask) { masked = true; break; }
        if (masked) continue;
        double psi = ideal_phase(geom, map, incidence, phi, f, plan.element);
        double x = ideal_reactance(psi, options.z0);
        if (!std::isfinite(x)) continue;
        grid.push_back(f);
        target.push_back(x);
    }
    return fit_sections(plan, grid, target, options.z0);
}

FosterCircuit fit_sections(const PolePlan& plan, const std::vector<double>& grid_hz,
                           const std::vector<double>& target_ohm, double z0) {
    if (grid_hz.size() != target_ohm.size())
        throw validation_error("fit grid and target size mismatch");
    auto p = static_cast<int>(plan.poles_hz.size());
    auto m = static_cast<int>(grid_hz.size());
    if (m < p)
        throw synthesis_error("pole mask left fewer samples than unknowns for element " +
                              std::to_string(plan.element));

    Eigen::MatrixXd basis(m, p);
    Eigen::VectorXd x(m);
    for (int i = 0; i < m; ++i) {
        // weight by the local phase sensitivity d psi / d X so the residual
        // tracks the reflection phase instead of the raw reactance
        double weight = std::sqrt(2.0 * z0 / (z0 * z0 + target_ohm[i] * target_ohm[i]));
        basis.row(i) = weight * reactance_basis(plan, grid_hz[i]).transpose();
        x[i] = weight * target_ohm[i];
    }
    Eigen::MatrixXd q = basis.transpose() * basis;
    Eigen::VectorXd mu = basis.transpose() * x;
    Eigen::VectorXd l = q.ldlt().solve(mu);
    if ((q * l - mu).norm() > 1e-6 * mu.norm())
        l = basis.colPivHouseholderQr().solve(x); // ill-conditioned normal equations

    FosterCircuit circ;
    circ.element = plan.element;
    for (int s = 0; s < p; ++s) {
        FosterSection section;
        section.l_henry = l[s];
        section.c_farad = 1.0 / (l[s] * std::pow(2.0 * kPi * plan.poles_hz[s], 2));
        if (section.l_henry <= 0.0) circ.realizable = false;
        circ.sections.push_back(section);
    }
    return circ;
}

double realized_reactance(const FosterCircuit& circuit, double f) {
    double x = 0.0;
    double w = 2.0 * kPi * f;
    for (const FosterSection& s : circuit.sections)
        x += w * s.l_henry / (1.0 - w * w * s.l_henry * s.c_farad);
    return x;
}

} // namespace mtp
