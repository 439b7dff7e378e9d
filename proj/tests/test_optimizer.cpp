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

#include <doctest.h>

#include <chrono>
#include <random>

#include "metaprism/optimizer.hpp"
#include "metaprism/runner.hpp"

using namespace mtp;

namespace {

Eigen::VectorXcd random_phases(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    Eigen::VectorXcd gamma(n);
    for (int i = 0; i < n; ++i) gamma[i] = std::polar(1.0, u(rng));
    return gamma;
}

Eigen::MatrixXcd random_coupling(std::mt19937_64& rng, int n, double scale) {
    std::normal_distribution<double> g(0.0, 1.0);
    Eigen::MatrixXcd s(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) {
            s(i, j) = scale * cplx(g(rng), g(rng));
            s(j, i) = s(i, j); // reciprocal surface
        }
    return s;
}

Scenario small_scenario() {
    Scenario sc;
    sc.count_nu = 4;
    sc.count_zeta = 1;
    sc.users = 3;
    return sc;
}

} // namespace

TEST_CASE("rank-one detachment matches direct inversion") {
    std::mt19937_64 rng(2024);
    auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        int n_elems = 16;
        Eigen::MatrixXcd s_ss = random_coupling(rng, n_elems, 0.05);
        Eigen::VectorXcd gamma = random_phases(rng, n_elems);
        int n = trial % n_elems;
        RankOneSplit split = rank_one_split(gamma, s_ss, n);
        std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
        double psi = u(rng);
        Eigen::VectorXcd loaded = gamma;
        loaded[n] = std::polar(1.0, psi);
        Eigen::MatrixXcd direct =
            (loaded.cwiseInverse().asDiagonal().toDenseMatrix() - s_ss).inverse();
        Eigen::MatrixXcd fast = split.a - split.b / (std::polar(1.0, psi) + split.c);
        worst = std::max(worst, (fast - direct).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-10);
    double seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start).count();
    CHECK(seconds < 1.0);
}

TEST_CASE("element channel split agrees with the full solve") {
    std::mt19937_64 rng(5);
    int n_elems = 8;
    MultiportNetwork net;
    net.s_rt = cplx(0.01, 0.02);
    net.s_rm = random_phases(rng, n_elems).transpose() * 0.01;
    net.s_mt = random_phases(rng, n_elems) * 0.01;
    net.s_ss = random_coupling(rng, n_elems, 0.03);
    Eigen::VectorXcd gamma = random_phases(rng, n_elems);
    for (int n = 0; n < n_elems; ++n) {
        RankOneSplit split = rank_one_split(gamma, net.s_ss, n);
        ElementChannel ch = element_channel(net, split);
        for (double psi : {0.0, 1.1, 3.9}) {
            Eigen::VectorXcd loaded = gamma;
            loaded[n] = std::polar(1.0, psi);
            cplx full = realistic_channel(net, loaded);
            CHECK(std::abs(full - ch.at(std::polar(1.0, psi))) < 1e-12);
        }
    }
}

TEST_CASE("single-slot uncoupled optimum aligns the element phases") {
    std::mt19937_64 rng(17);
    int n_elems = 6;
    MultiportNetwork net;
    net.s_rt = 0.0;
    net.s_rm = random_phases(rng, n_elems).transpose() * 0.01;
    net.s_mt = random_phases(rng, n_elems) * 0.01;
    net.s_ss = Eigen::MatrixXcd::Zero(n_elems, n_elems);
    net.frequency_hz = 3.6e9;

    BandPlan band(3.6e9, 1e8, 2);
    OptimizeOptions options;
    options.grid.n_alpha = 2;
    options.grid.n_gamma = 256;
    Eigen::MatrixXd psi0 = Eigen::MatrixXd::Zero(2, n_elems);
    UnconstrainedResult res = optimize_unconstrained({net, net}, band, psi0, options,
                                                     1e-3, 1e-19);
    double best = 0.0;
    for (int i = 0; i < n_elems; ++i) best += std::abs(net.s_rm[i] * net.s_mt[i]);
    Eigen::VectorXcd gamma(n_elems);
    for (int i = 0; i < n_elems; ++i) gamma[i] = std::polar(1.0, res.psi(0, i));
    double reached = std::abs(realistic_channel(net, gamma));
    // one gamma-grid step of slack on the coherent sum
    CHECK(reached > best * std::cos(kPi / options.grid.n_gamma));
}

TEST_CASE("alternating optimization on a small surface") {
    Scenario sc = small_scenario();
    std::vector<MultiportNetwork> nets = build_user_networks(sc);
    MtpGeometry geom = sc.geometry();
    AngleFrequencyMap map = sc.mapping(sc.user_count());
    BandPlan band = map.band();
    PhaseProfile initial = ideal_profile(geom, map, sc.incidence(), sc.phi_rad);
    OptimizeOptions options;
    options.grid = SearchGrid::for_design(geom, map, 60, 40);
    OptimizeResult res = optimize(nets, band, initial, options, 1e-3, 2.9e-20);

    SUBCASE("trace is non-decreasing and converged") {
        REQUIRE(res.report.trace_bps.size() >= 2);
        for (std::size_t q = 1; q < res.report.trace_bps.size(); ++q)
            CHECK(res.report.trace_bps[q] >= res.report.trace_bps[q - 1]);
        CHECK(res.report.converged);
        CHECK(res.report.mu <= options.epsilon);
    }

    SUBCASE("optimization does not lose capacity") {
        CapacityReport base = capacity(nets, band, initial.psi(band), 1e-3, 2.9e-20);
        CHECK(res.report.capacity_bps >= base.capacity_bps);
    }
}

TEST_CASE("ideal model input exits at the initial profile") {
    Scenario sc = small_scenario();
    std::vector<MultiportNetwork> nets = build_ideal_networks(sc);
    MtpGeometry geom = sc.geometry();
    AngleFrequencyMap map = sc.mapping(sc.user_count());
    PhaseProfile initial = ideal_profile(geom, map, sc.incidence(), sc.phi_rad);
    OptimizeOptions options;
    options.grid = SearchGrid::for_design(geom, map, 60, 40);
    OptimizeResult res = optimize(nets, map.band(), initial, options, 1e-3, 2.9e-20);
    // the exact start is already optimal, so no grid pair strictly improves
    for (int n = 0; n < geom.element_count(); ++n) {
        CHECK(res.profile.alpha[n] == initial.alpha[n]);
        CHECK(res.profile.gamma[n] == initial.gamma[n]);
    }
    CHECK(res.report.iterations <= 2);
}

TEST_CASE("search grid snapping is idempotent") {
    Scenario sc;
    MtpGeometry geom = sc.geometry();
    AngleFrequencyMap map = sc.mapping(9);
    SearchGrid grid = SearchGrid::for_design(geom, map, 300, 100);
    CHECK(grid.alpha_min < grid.alpha_max);
    CHECK(grid.alpha_max == 0.0);
    for (int i : {0, 1, 150, 299})
        CHECK(grid.snap_alpha(grid.alpha_at(i)) == i);
    for (int j : {0, 1, 50, 99})
        CHECK(grid.snap_gamma(grid.gamma_at(j)) == j);
    // the steepest ideal slope lies on the grid range
    PhaseProfile ideal = ideal_profile(geom, map, sc.incidence(), sc.phi_rad);
    CHECK(ideal.alpha.minCoeff() >= grid.alpha_min - 1e-18);
    CHECK(ideal.alpha.maxCoeff() <= grid.alpha_max + 1e-18);
}
