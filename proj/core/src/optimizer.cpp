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

#include "metaprism/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "metaprism/parallel.hpp"

namespace mtp {

namespace {

double wrap_two_pi(double x) {
    double r = std::fmod(x, 2.0 * kPi);
    return r < 0.0 ? r + 2.0 * kPi : r;
}

void check_networks(const std::vector<MultiportNetwork>& nets, const BandPlan& band) {
    if (static_cast<int>(nets.size()) != band.samples)
        throw validation_error("need one network per band sample");
    for (std::size_t k = 1; k < nets.size(); ++k)
        if (nets[k].element_count() != nets[0].element_count())
            throw validation_error("network element counts differ across users");
}

double slot_rate(double w_over_k, double gain_sq, double snr_scale) {
    return w_over_k * std::log2(1.0 + gain_sq * snr_scale);
}

} // namespace

Eigen::MatrixXd PhaseProfile::psi(const BandPlan& band) const {
    Eigen::MatrixXd m(band.samples, element_count());
    for (int k = 0; k < band.samples; ++k)
        for (int n = 0; n < element_count(); ++n)
            m(k, n) = phase(n, band.frequency(k), band.f0);
    return m;
}

Eigen::VectorXcd PhaseProfile::reflections(const BandPlan& band, int k) const {
    Eigen::VectorXcd g(element_count());
    for (int n = 0; n < element_count(); ++n)
        g[n] = std::polar(1.0, phase(n, band.frequency(k), band.f0));
    return g;
}

PhaseProfile ideal_profile(const MtpGeometry& geom, const AngleFrequencyMap& map,
                           const Direction& incidence, double phi, double psi0) {
    const BandPlan& band = map.band();
    PhaseProfile profile;
    profile.alpha.resize(geom.element_count());
    profile.gamma.resize(geom.element_count());
    double f1 = band.low(), f2 = band.high();
    for (int n = 0; n < geom.element_count(); ++n) {
        double p1 = ideal_phase(geom, map, incidence, phi, f1, n, psi0);
        double p2 = ideal_phase(geom, map, incidence, phi, f2, n, psi0);
        profile.alpha[n] = (p2 - p1) / (f2 - f1);
        double at_f0 = ideal_phase(geom, map, incidence, phi, band.f0, n, psi0);
        profile.gamma[n] = wrap_two_pi(at_f0);
    }
    return profile;
}

SearchGrid SearchGrid::for_design(const MtpGeometry& geom, const AngleFrequencyMap& map,
                                  int n_alpha, int n_gamma) {
    if (n_alpha < 2 || n_gamma < 2) throw validation_error("search grid too small");
    SearchGrid grid;
    grid.n_alpha = n_alpha;
    grid.n_gamma = n_gamma;
    // steepest ideal slope belongs to the last column; slopes are negative
    double steepest = -2.0 * kPi * (geom.count_nu() - 1) * geom.delta_nu() *
                      map.alpha() / map.band().lambda0();
    grid.alpha_min = std::min(steepest, 0.0);
    grid.alpha_max = std::max(steepest, 0.0);
    return grid;
}

double SearchGrid::alpha_at(int i) const {
    return alpha_min + (alpha_max - alpha_min) * i / (n_alpha - 1);
}

double SearchGrid::gamma_at(int j) const { return 2.0 * kPi * j / n_gamma; }

int SearchGrid::snap_alpha(double alpha) const {
    if (alpha_max == alpha_min) return 0;
    double t = (alpha - alpha_min) / (alpha_max - alpha_min) * (n_alpha - 1);
    return std::clamp(static_cast<int>(std::lround(t)), 0, n_alpha - 1);
}

int SearchGrid::snap_gamma(double gamma) const {
    auto j = static_cast<int>(std::lround(wrap_two_pi(gamma) / (2.0 * kPi) * n_gamma));
    return j % n_gamma;
}

CapacityReport capacity(const std::vector<MultiportNetwork>& nets, const BandPlan& band,
                        const Eigen::MatrixXd& psi, double tx_power_w,
                        double noise_w_hz) {
    check_networks(nets, band);
    if (psi.rows() != band.samples || psi.cols() != nets[0].element_count())
        throw validation_error("phase matrix shape mismatch");
    if (tx_power_w <= 0.0 || noise_w_hz <= 0.0)
        throw validation_error("power and noise density must be positive");
    int k_count = band.samples;
    double w_over_k = band.width / k_count;
    double snr_scale = tx_power_w / (band.width * noise_w_hz);
    CapacityReport report;
    report.tx_power_w = tx_power_w;
    report.noise_w_hz = noise_w_hz;
    report.rates_bps.resize(k_count);
    report.gains.resize(k_count);
    for (int k = 0; k < k_count; ++k) {
        Eigen::VectorXcd gamma(psi.cols());
        for (int n = 0; n < psi.cols(); ++n) gamma[n] = std::polar(1.0, psi(k, n));
        cplx h = realistic_channel(nets[k], gamma);
        report.gains[k] = std::norm(h);
        report.rates_bps[k] = slot_rate(w_over_k, report.gains[k], snr_scale);
        report.capacity_bps += report.rates_bps[k];
    }
    return report;
}

RankOneSplit rank_one_split(const Eigen::VectorXcd& gamma, const Eigen::MatrixXcd& s_ss,
                            int n) {
    auto size = static_cast<int>(gamma.size());
    if (s_ss.rows() != size || s_ss.cols() != size)
        throw validation_error("coupling block size mismatch");
    if (n < 0 || n >= size) throw validation_error("element index out of range");
    // diagonal of inverse loads with the detached entry zeroed
    Eigen::MatrixXcd m = -s_ss;
    for (int i = 0; i < size; ++i)
        if (i != n) m(i, i) += 1.0 / gamma[i];
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(m);
    if (!lu.isInvertible())
        throw numerical_error("detached network matrix is singular");
    RankOneSplit split;
    split.a = lu.solve(Eigen::MatrixXcd::Identity(size, size));
    split.b = split.a.col(n) * split.a.row(n);
    split.c = split.a(n, n);
    return split;
}

ElementChannel element_channel(const MultiportNetwork& net, const RankOneSplit& split) {
    ElementChannel ch;
    ch.d = net.s_rt + (net.s_rm * split.a * net.s_mt).value();
    ch.f = -(net.s_rm * split.b * net.s_mt).value();
    ch.c = split.c;
    return ch;
}

ElementChannel element_channel(const MultiportNetwork& net, const Eigen::VectorXcd& gamma,
                               int n) {
    // an element with no coupling row decouples from the rest of the
    // surface, which makes the detached matrix singular; its channel is
    // affine in the reflection coefficient instead
    if (net.s_ss.row(n).cwiseAbs().sum() == 0.0 &&
        net.s_ss.col(n).cwiseAbs().sum() == 0.0) {
        ElementChannel ch;
        ch.affine = true;
        ch.f = net.s_rm[n] * net.s_mt[n];
        Eigen::VectorXcd rest = gamma;
        rest[n] = 1.0;
        ch.d = realistic_channel(net, rest) - ch.f;
        ch.c = 0.0;
        return ch;
    }
    return element_channel(net, rank_one_split(gamma, net.s_ss, n));
}

namespace {

// Objective of one element over the (alpha, gamma) grid, without touching
// the other K - 1 slots. Returns the best strictly-improving grid pair.
struct GridBest {
    double value = -1.0;
    int i = 0, j = 0;
};

GridBest scan_element_grid(const std::vector<ElementChannel>& ch,
                           const std::vector<double>& df, double w_over_k,
                           double snr_scale, const SearchGrid& grid) {
    int k_count = static_cast<int>(ch.size());
    std::vector<cplx> v(grid.n_gamma);
    for (int j = 0; j < grid.n_gamma; ++j) v[j] = std::polar(1.0, grid.gamma_at(j));

    std::vector<GridBest> best_per_alpha(grid.n_alpha);
    parallel_for(grid.n_alpha, [&](int i) {
        std::vector<cplx> u(k_count);
        for (int k = 0; k < k_count; ++k) u[k] = std::polar(1.0, grid.alpha_at(i) * df[k]);
        GridBest best;
        best.i = i;
        for (int j = 0; j < grid.n_gamma; ++j) {
            double c_sum = 0.0;
            for (int k = 0; k < k_count; ++k)
                c_sum += slot_rate(w_over_k, std::norm(ch[k].at(u[k] * v[j])), snr_scale);
            if (c_sum > best.value) { best.value = c_sum; best.j = j; }
        }
        best_per_alpha[i] = best;
    });
    GridBest best = best_per_alpha[0];
    for (int i = 1; i < grid.n_alpha; ++i)
        if (best_per_alpha[i].value > best.value) best = best_per_alpha[i];
    return best;
}

} // namespace

OptimizeResult optimize(const std::vector<MultiportNetwork>& nets, const BandPlan& band,
                        const PhaseProfile& initial, const OptimizeOptions& options,
                        double tx_power_w, double noise_w_hz) {
    check_networks(nets, band);
    int n_count = nets[0].element_count();
    if (initial.element_count() != n_count)
        throw validation_error("initial profile size mismatch");
    const SearchGrid& grid = options.grid;

    // the incumbent keeps its exact coefficients; grid pairs are only
    // accepted on strict improvement, so an already optimal start is left
    // untouched
    PhaseProfile profile = initial;

    int k_count = band.samples;
    double w_over_k = band.width / k_count;
    double snr_scale = tx_power_w / (band.width * noise_w_hz);
    std::vector<double> df(k_count);
    for (int k = 0; k < k_count; ++k) df[k] = band.frequency(k) - band.f0;

    Eigen::MatrixXd psi = profile.psi(band);
    CapacityReport report = capacity(nets, band, psi, tx_power_w, noise_w_hz);
    double c_cur = report.capacity_bps;
    report.trace_bps.push_back(c_cur);

    for (int q = 0; q < options.max_outer; ++q) {
        double c_before = c_cur;
        for (int n = 0; n < n_count; ++n) {
            std::vector<ElementChannel> ch(k_count);
            for (int k = 0; k < k_count; ++k) {
                Eigen::VectorXcd gamma(n_count);
                for (int m = 0; m < n_count; ++m) gamma[m] = std::polar(1.0, psi(k, m));
                ch[k] = element_channel(nets[k], gamma, n);
            }
            GridBest best = scan_element_grid(ch, df, w_over_k, snr_scale, grid);
            if (best.value > c_cur) {
                profile.alpha[n] = grid.alpha_at(best.i);
                profile.gamma[n] = grid.gamma_at(best.j);
                for (int k = 0; k < k_count; ++k)
                    psi(k, n) = profile.alpha[n] * df[k] + profile.gamma[n];
                c_cur = best.value;
            }
        }
        report.trace_bps.push_back(c_cur);
        report.iterations = q + 1;
        report.mu = std::abs(c_cur - c_before) / std::max(c_before, 1e-300);
        if (report.mu <= options.epsilon) break;
    }
    report.converged = report.mu <= options.epsilon;

    CapacityReport final = capacity(nets, band, psi, tx_power_w, noise_w_hz);
    final.trace_bps = report.trace_bps;
    final.mu = report.mu;
    final.iterations = report.iterations;
    final.converged = report.converged;
    return {profile, final};
}

UnconstrainedResult optimize_unconstrained(const std::vector<MultiportNetwork>& nets,
                                           const BandPlan& band,
                                           const Eigen::MatrixXd& initial_psi,
                                           const OptimizeOptions& options,
                                           double tx_power_w, double noise_w_hz) {
    check_networks(nets, band);
    int n_count = nets[0].element_count();
    int k_count = band.samples;
    if (initial_psi.rows() != k_count || initial_psi.cols() != n_count)
        throw validation_error("initial phase matrix shape mismatch");
    const SearchGrid& grid = options.grid;
    double w_over_k = band.width / k_count;
    double snr_scale = tx_power_w / (band.width * noise_w_hz);

    // exact incumbent phases; grid offsets replace them only on strict
    // per-slot improvement
    Eigen::MatrixXd psi = initial_psi;

    CapacityReport report = capacity(nets, band, psi, tx_power_w, noise_w_hz);
    std::vector<double> rates = report.rates_bps;
    double c_cur = report.capacity_bps;
    report.trace_bps.push_back(c_cur);

    std::vector<cplx> v(grid.n_gamma);
    for (int j = 0; j < grid.n_gamma; ++j) v[j] = std::polar(1.0, grid.gamma_at(j));

    for (int q = 0; q < options.max_outer; ++q) {
        double c_before = c_cur;
        for (int n = 0; n < n_count; ++n) {
            for (int k = 0; k < k_count; ++k) {
                Eigen::VectorXcd gamma(n_count);
                for (int m = 0; m < n_count; ++m) gamma[m] = std::polar(1.0, psi(k, m));
                ElementChannel ch = element_channel(nets[k], gamma, n);
                double best_rate = rates[k];
                int best_j = -1;
                for (int j = 0; j < grid.n_gamma; ++j) {
                    double r = slot_rate(w_over_k, std::norm(ch.at(v[j])), snr_scale);
                    if (r > best_rate) { best_rate = r; best_j = j; }
                }
                if (best_j >= 0) {
                    psi(k, n) = grid.gamma_at(best_j);
                    c_cur += best_rate - rates[k];
                    rates[k] = best_rate;
                }
            }
        }
        report.trace_bps.push_back(c_cur);
        report.iterations = q + 1;
        report.mu = std::abs(c_cur - c_before) / std::max(c_before, 1e-300);
        if (report.mu <= options.epsilon) break;
    }
    report.converged = report.mu <= options.epsilon;

    CapacityReport final = capacity(nets, band, psi, tx_power_w, noise_w_hz);
    final.trace_bps = report.trace_bps;
    final.mu = report.mu;
    final.iterations = report.iterations;
    final.converged = report.converged;
    return {psi, final};
}

} // namespace mtp
