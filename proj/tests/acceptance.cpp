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

// Release gate: one self-contained check per shipping requirement, printed
// as a pass/fail line. Heavy end-to-end optimization scenarios run last.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "metaprism/multipath.hpp"
#include "metaprism/netlist.hpp"
#include "metaprism/runner.hpp"

using namespace mtp;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(clock::now() - start_).count();
    }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_ = clock::now();
};

void report(int id, const std::string& name, bool ok, double seconds,
            const std::string& detail = "") {
    std::printf("[%s] %02d %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", id, name.c_str(),
                seconds, detail.empty() ? "" : " -- ", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

double wrap_pi(double x) { return std::remainder(x, 2.0 * kPi); }

// Independent impedance oracle: reaction double integral of the sinusoidal
// current distributions with 2D composite Simpson. Shares no code with the
// closed-form kernel under test.
cplx reaction_oracle(const DipoleSpec& spec, double rho, double offset,
                     double frequency_hz, int points) {
    double k = 2.0 * kPi * frequency_hz / kSpeedOfLight;
    double arm = spec.length / 2.0;
    double rho_eff = std::max(rho, spec.radius);
    if (points % 2 == 0) ++points;
    double h = spec.length / (points - 1);
    auto weight = [points](int i) {
        if (i == 0 || i == points - 1) return 1.0;
        return i % 2 ? 4.0 : 2.0;
    };
    auto current = [k, arm](double u) { return std::sin(k * (arm - std::abs(u))); };
    auto slope = [k, arm](double u) {
        return -k * (u >= 0.0 ? 1.0 : -1.0) * std::cos(k * (arm - std::abs(u)));
    };
    cplx acc = 0.0;
    for (int i = 0; i < points; ++i) {
        double zs = -arm + i * h;
        cplx inner = 0.0;
        for (int j = 0; j < points; ++j) {
            double zo = offset - arm + j * h;
            double u = zo - offset;
            double r = std::sqrt(rho_eff * rho_eff + (zo - zs) * (zo - zs));
            cplx kern = std::polar(1.0, -k * r) / r;
            inner += weight(j) *
                     (k * k * current(zs) * current(u) - slope(zs) * slope(u)) * kern;
        }
        acc += weight(i) * inner;
    }
    acc *= (h / 3.0) * (h / 3.0);
    cplx z = cplx{0.0, kFreeSpaceImpedance / (4.0 * kPi * k)} * acc;
    double feed = std::sin(k * arm);
    return z / (feed * feed);
}

struct GainMap {
    std::vector<double> theta;              // distinct, ascending
    std::vector<std::vector<double>> db;    // [slot][angle]
};

GainMap read_gain_map(const std::string& path, int slots) {
    GainMap map;
    map.db.resize(slots);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line); // header
    double prev_f = -1.0;
    int k = -1;
    while (std::getline(in, line)) {
        double theta, f, db, ph;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &theta, &f, &db, &ph) != 4)
            continue;
        if (f != prev_f) { prev_f = f; ++k; }
        if (k == 0) map.theta.push_back(theta);
        map.db[k].push_back(db);
    }
    return map;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string run_dir(const std::string& name) {
    fs::path p = fs::path("acceptance_runs") / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p.string();
}

std::string format_mbps(double a, double b, double c) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "non-opt %.2f / opt %.2f / free %.2f Mbps", a / 1e6,
                  b / 1e6, c / 1e6);
    return buf;
}

} // namespace

int main() {
    Scenario sc; // reference deployment, 16 x 4 at 3.6 GHz
    MtpGeometry geom = sc.geometry();
    AngleFrequencyMap map = sc.mapping(sc.user_count());
    const BandPlan& band = map.band();

    { // 01: angle endpoints of the frequency-to-angle mapping
        Timer t;
        AngleFrequencyMap m = sc.mapping(sc.user_count());
        double lo = m.angle_at(sc.f0_hz - sc.bandwidth_hz / 2.0);
        double hi = m.angle_at(sc.f0_hz + sc.bandwidth_hz / 2.0);
        double s = t.seconds();
        bool ok = std::abs(lo - kPi / 6.0) < 1e-12 && std::abs(hi - kPi / 3.0) < 1e-12 &&
                  s < 1e-3;
        report(1, "mapping endpoints", ok, s);
    }

    { // 02: each of 17 slots steers its beam to the mapped angle
        Timer t;
        AngleFrequencyMap m17 = sc.mapping(17);
        const int grid = 1001;
        double step = kPi / (grid - 1);
        bool ok = true;
        for (int k = 0; k < 17; ++k) {
            double f_k = m17.band().frequency(k);
            Eigen::VectorXcd gamma(geom.element_count());
            for (int n = 0; n < geom.element_count(); ++n)
                gamma[n] = std::polar(1.0, ideal_phase(geom, m17, sc.incidence(),
                                                       sc.phi_rad, f_k, n));
            double best = -1.0, best_theta = 0.0;
            for (int g = 0; g < grid; ++g) {
                double theta = -kPi / 2.0 + step * g;
                double mag = std::abs(ideal_channel_gain(geom, gamma, sc.incidence(),
                                                         {theta, sc.phi_rad}, band.f0));
                if (mag > best) { best = mag; best_theta = theta; }
            }
            if (std::abs(best_theta - m17.angle_at(f_k)) > step + 1e-12) ok = false;
        }
        double s = t.seconds();
        report(2, "beam placement over 17 slots", ok && s < 1.0, s);
    }

    { // 03: beam bandwidth at the 5% droop
        Timer t;
        BandwidthReport bw = bandwidth(geom, map, 0.05, sc.phi_rad);
        bool ok = std::abs(bw.exact_hz - 12e6) < 0.10 * 12e6 &&
                  std::abs(bw.approx_hz - bw.exact_hz) < 0.15 * bw.exact_hz;
        char detail[96];
        std::snprintf(detail, sizeof(detail), "exact %.3f MHz, closed form %.3f MHz",
                      bw.exact_hz / 1e6, bw.approx_hz / 1e6);
        report(3, "droop bandwidth", ok, t.seconds(), detail);
    }

    { // 04: Dirichlet-product response vs direct beam-gain ratio
        Timer t;
        bool ok = true;
        int k = band.samples / 2;
        double f_k = band.frequency(k);
        for (int i = 0; i < 100; ++i) {
            double df = -4e6 + 8e6 * i / 99.0;
            Eigen::VectorXcd g0(geom.element_count()), g1(geom.element_count());
            for (int n = 0; n < geom.element_count(); ++n) {
                g0[n] = std::polar(1.0, ideal_phase(geom, map, sc.incidence(), sc.phi_rad,
                                                    f_k, n));
                g1[n] = std::polar(1.0, ideal_phase(geom, map, sc.incidence(), sc.phi_rad,
                                                    f_k + df, n));
            }
            double theta = map.angle_at(f_k + df);
            double direct =
                std::abs(ideal_channel_gain(geom, g0, sc.incidence(), {theta, sc.phi_rad},
                                            band.f0)) /
                std::abs(ideal_channel_gain(geom, g1, sc.incidence(), {theta, sc.phi_rad},
                                            band.f0));
            double closed = std::abs(frequency_response_at_beam(geom, map, df, sc.phi_rad));
            if (std::abs(direct - closed) > 1e-9 * closed) ok = false;
        }
        report(4, "closed-form frequency response", ok, t.seconds());
    }

    { // 05: effective Rician factor against quadrature and Monte Carlo
        Timer t;
        double theta0 = map.angle_at(band.f0);
        double k_iso =
            effective_rician_factor(MultipathSpec::isotropic(1.0), geom, map,
                                    sc.incidence(), band.f0);
        double k_con =
            effective_rician_factor(MultipathSpec::concentrated(1.0, theta0, 0.02), geom,
                                    map, sc.incidence(), band.f0);
        MultipathSpec diffuse = MultipathSpec::isotropic(0.0);
        MultipathSampler sampler(diffuse, geom, map, sc.incidence(), band.f0);
        double quad = sampler.diffuse_power();
        double mc = 0.0;
        const int draws = 10000;
        for (int d = 0; d < draws; ++d) mc += std::norm(sampler.draw(9000 + d));
        mc /= draws;
        bool ok = k_iso > 10.0 && k_con >= 1.0 && k_con <= 1.1 &&
                  std::abs(mc - quad) < 0.05 * quad;
        char detail[96];
        std::snprintf(detail, sizeof(detail), "iso %.1f, on-beam %.3f, MC/quad %.3f",
                      k_iso, k_con, mc / quad);
        report(5, "effective Rician factor", ok, t.seconds(), detail);
    }

    { // 06: pole-count bound and wrap placement
        Timer t;
        bool ok = pole_count_bound(geom, map, 15) == 2;
        PolePlan far_plan = plan_poles(geom, map, sc.incidence(), sc.phi_rad, 15);
        if (far_plan.in_band_count(band) < 2) ok = false;
        for (int n = 0; n < geom.element_count() && ok; ++n) {
            PolePlan plan = plan_poles(geom, map, sc.incidence(), sc.phi_rad, n);
            if (plan.degenerate) continue;
            for (double fp : plan.poles_hz) {
                double psi = ideal_phase(geom, map, sc.incidence(), sc.phi_rad, fp, n);
                if (std::abs(wrap_pi(psi)) >= 1e-6) ok = false;
            }
        }
        report(6, "anti-resonance planning", ok, t.seconds());
    }

    std::vector<FosterCircuit> circuits(geom.element_count());
    { // 07: load fit accuracy across the surface + exact recovery
        Timer t;
        double mask = default_mask_halfwidth(geom, map);
        bool ok = true;
        double worst_x = 0.0, worst_psi = 0.0;
        for (int n = 0; n < geom.element_count(); ++n) {
            PolePlan plan = plan_poles(geom, map, sc.incidence(), sc.phi_rad, n);
            circuits[n] = fit_inductances(geom, map, sc.incidence(), sc.phi_rad, plan);
            if (!circuits[n].realizable) { ok = false; continue; }
            double sq_x = 0.0, sq_ref = 0.0, sq_psi = 0.0;
            int used = 0;
            for (int i = 0; i < 201; ++i) {
                double f = band.low() + band.width * i / 200.0;
                bool masked = false;
                for (double fp : plan.poles_hz)
                    if (std::abs(f - fp) < mask) { masked = true; break; }
                if (masked) continue;
                double psi_t =
                    ideal_phase(geom, map, sc.incidence(), sc.phi_rad, f, n);
                double x_t = ideal_reactance(psi_t, sc.z0_ohm);
                if (!std::isfinite(x_t)) continue;
                double x_r = realized_reactance(circuits[n], f);
                double psi_r = std::arg(reflection_coefficient(x_r, sc.z0_ohm));
                sq_x += (x_r - x_t) * (x_r - x_t);
                sq_ref += x_t * x_t;
                sq_psi += std::pow(wrap_pi(psi_r - psi_t), 2);
                ++used;
            }
            if (sq_ref > 0.0) worst_x = std::max(worst_x, std::sqrt(sq_x / sq_ref));
            if (used > 0) worst_psi = std::max(worst_psi, std::sqrt(sq_psi / used));
        }
        if (worst_x >= 0.05 || worst_psi >= 0.1) ok = false;
        // synthetic data generated by a known one-section circuit comes back exactly
        PolePlan plan;
        plan.wrap_index = {1};
        plan.poles_hz = {3.8e9};
        double l_true = 4.2e-9;
        std::vector<double> grid_hz, target;
        for (int i = 0; i <= 100; ++i) {
            double f = 3.55e9 + 1e6 * i;
            grid_hz.push_back(f);
            target.push_back(l_true * reactance_basis(plan.poles_hz[0], f));
        }
        FosterCircuit rec = fit_sections(plan, grid_hz, target, sc.z0_ohm);
        if (std::abs(rec.sections[0].l_henry - l_true) >= 1e-12 * l_true) ok = false;
        char detail[96];
        std::snprintf(detail, sizeof(detail),
                      "worst reactance RMS %.2f%%, worst phase RMS %.4f rad",
                      100.0 * worst_x, worst_psi);
        report(7, "reactive load fit", ok, t.seconds(), detail);
    }

    { // 08: slope positivity between poles and section resonance identity
        Timer t;
        bool ok = true;
        for (int n = 0; n < geom.element_count(); ++n) {
            const FosterCircuit& circ = circuits[n];
            if (!circ.realizable) { ok = false; continue; }
            double step = band.width / 1000.0;
            double guard = 3.0 * step;
            for (int i = 0; i < 1000; ++i) {
                double f = band.low() + band.width * (i + 0.5) / 1000.0;
                bool near_pole = false;
                for (const FosterSection& sec : circ.sections)
                    if (std::abs(f - sec.resonance_hz()) < guard) near_pole = true;
                if (near_pole) continue;
                double dx = realized_reactance(circ, f + step / 2.0) -
                            realized_reactance(circ, f - step / 2.0);
                if (dx <= 0.0) ok = false;
            }
            PolePlan plan = plan_poles(geom, map, sc.incidence(), sc.phi_rad, n);
            if (plan.degenerate) continue;
            for (std::size_t p = 0; p < circ.sections.size(); ++p)
                if (std::abs(circ.sections[p].resonance_hz() - plan.poles_hz[p]) >=
                    1e-9 * plan.poles_hz[p])
                    ok = false;
        }
        report(8, "Foster slope and resonances", ok, t.seconds());
    }

    { // 09: impedance/scattering round trip and degeneration
        Timer t;
        Eigen::Vector3d tx = radial_position(sc.incidence(), sc.tx_distance_m);
        Eigen::Vector3d rx = radial_position({kPi / 4.0, sc.phi_rad}, sc.rx_distance_m);
        ImpedanceMatrix zm =
            build_impedance_matrix(geom, sc.dipole(), tx, rx, sc.f0_hz);
        Eigen::MatrixXcd s = z_to_s(zm.z, sc.z0_ohm);
        Eigen::MatrixXcd back = s_to_z(s, sc.z0_ohm);
        bool ok = (back - zm.z).norm() < 1e-9 * zm.z.norm();
        MultiportNetwork net = z_to_s_partition(zm, sc.z0_ohm);
        if ((net.s_ss - net.s_ss.transpose()).cwiseAbs().maxCoeff() >= 1e-10) ok = false;
        // degenerate network equals the two-hop sum
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
        Eigen::VectorXcd gamma(geom.element_count());
        for (int n = 0; n < geom.element_count(); ++n)
            gamma[n] = std::polar(1.0, u(rng));
        MultiportNetwork bare = net.without_coupling().without_structural();
        cplx two_hop = 0.0;
        for (int n = 0; n < geom.element_count(); ++n)
            two_hop += net.s_rm[n] * gamma[n] * net.s_mt[n];
        cplx h = realistic_channel(bare, gamma);
        if (std::abs(h - two_hop) >= 1e-9 * std::abs(two_hop)) ok = false;
        // the analytic model networks reproduce the far-field gain
        std::vector<MultiportNetwork> ideal_nets = build_ideal_networks(sc);
        for (int k = 0; k < sc.user_count(); ++k) {
            const MultiportNetwork& nk = ideal_nets[k];
            double scale = std::abs(nk.s_rm[0] * nk.s_mt[0]);
            cplx got = realistic_channel(nk, gamma);
            cplx want = scale * ideal_channel_gain(
                                    geom, gamma, sc.incidence(),
                                    {map.angle_at(band.frequency(k)), sc.phi_rad},
                                    sc.f0_hz);
            if (std::abs(got - want) >= 1e-9 * scale * geom.element_count()) ok = false;
        }
        report(9, "Z/S round trip and degeneration", ok, t.seconds());
    }

    { // 10: electromagnetic kernel against the reaction integral
        Timer t;
        DipoleSpec spec = sc.dipole();
        cplx self = self_impedance(spec, sc.f0_hz);
        cplx self_ref = reaction_oracle(spec, spec.radius, 0.0, sc.f0_hz, 4001);
        bool ok = std::abs(self - self_ref) < 0.02 * std::abs(self_ref);
        double lambda = sc.lambda0();
        for (double d : {0.25, 0.5, 1.0}) {
            cplx z = mutual_impedance_parallel(spec, d * lambda, 0.0, sc.f0_hz);
            cplx ref = reaction_oracle(spec, d * lambda, 0.0, sc.f0_hz, 1201);
            if (std::abs(z - ref) >= 0.03 * std::abs(ref)) ok = false;
        }
        report(10, "induced-EMF kernel oracle", ok, t.seconds());
    }

    { // 11: rank-one detachment identity
        Timer t;
        std::mt19937_64 rng(2024);
        std::normal_distribution<double> g(0.0, 1.0);
        std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
        double worst = 0.0;
        for (int trial = 0; trial < 20; ++trial) {
            int n_elems = 16;
            Eigen::MatrixXcd s_ss(n_elems, n_elems);
            for (int i = 0; i < n_elems; ++i)
                for (int j = 0; j <= i; ++j) {
                    s_ss(i, j) = 0.05 * cplx(g(rng), g(rng));
                    s_ss(j, i) = s_ss(i, j);
                }
            Eigen::VectorXcd gamma(n_elems);
            for (int i = 0; i < n_elems; ++i) gamma[i] = std::polar(1.0, u(rng));
            int n = trial % n_elems;
            RankOneSplit split = rank_one_split(gamma, s_ss, n);
            double psi = u(rng);
            Eigen::VectorXcd loaded = gamma;
            loaded[n] = std::polar(1.0, psi);
            Eigen::MatrixXcd direct =
                (loaded.cwiseInverse().asDiagonal().toDenseMatrix() - s_ss).inverse();
            Eigen::MatrixXcd fast =
                split.a - split.b / (std::polar(1.0, psi) + split.c);
            worst = std::max(worst, (fast - direct).cwiseAbs().maxCoeff());
        }
        double s = t.seconds();
        char detail[64];
        std::snprintf(detail, sizeof(detail), "max deviation %.2e", worst);
        report(11, "rank-one inversion identity", worst < 1e-10 && s < 1.0, s, detail);
    }

    // heavy end-to-end scenarios: two angular windows x two element spacings
    struct ScenarioRun {
        std::string name;
        Scenario sc;
        OptimizeArtifacts art;
        double seconds = 0.0;
    };
    std::vector<ScenarioRun> runs;
    for (bool wide_window : {false, true}) {
        for (bool quarter : {false, true}) {
            ScenarioRun r;
            r.sc = Scenario{};
            if (wide_window) {
                r.sc.theta_min_rad = kPi / 4.0;
                r.sc.theta_max_rad = kPi / 2.0;
            }
            if (quarter) {
                // constant aperture: halve the spacing, double the row count
                r.sc.spacing_nu_lambda = 0.25;
                r.sc.count_nu = 32;
            }
            r.name = std::string(wide_window ? "wide" : "narrow") + "_" +
                     (quarter ? "quarter" : "half");
            runs.push_back(std::move(r));
        }
    }
    for (ScenarioRun& r : runs) {
        Timer t;
        RunOptions options;
        options.out_dir = run_dir(r.name);
        r.art = run_optimize(r.sc, options);
        r.seconds = t.seconds();
        std::printf("       scenario %-14s %s, %d iterations, %.0f s\n", r.name.c_str(),
                    format_mbps(r.art.non_opt.capacity_bps,
                                r.art.constrained.capacity_bps,
                                r.art.unconstrained.capacity_bps)
                        .c_str(),
                    r.art.constrained.iterations, r.seconds);
        std::fflush(stdout);
    }

    { // 12: alternating optimization convergence and ideal-model fixpoint
        Timer t;
        bool ok = true;
        for (const ScenarioRun& r : runs) {
            const CapacityReport& rep = r.art.constrained;
            for (std::size_t q = 1; q < rep.trace_bps.size(); ++q)
                if (rep.trace_bps[q] < rep.trace_bps[q - 1]) ok = false;
            if (!rep.converged || rep.mu > 1e-4 || rep.iterations > 50) ok = false;
            for (std::size_t q = 1; q < r.art.unconstrained.trace_bps.size(); ++q)
                if (r.art.unconstrained.trace_bps[q] <
                    r.art.unconstrained.trace_bps[q - 1])
                    ok = false;
        }
        RunOptions options;
        options.out_dir = run_dir("ideal_fixpoint");
        options.ideal_model = true;
        options.mode = OptimizeMode::Constrained;
        OptimizeArtifacts fix = run_optimize(sc, options);
        PhaseProfile initial =
            ideal_profile(geom, map, sc.incidence(), sc.phi_rad, sc.psi0_rad);
        for (int n = 0; n < geom.element_count(); ++n) {
            if (fix.optimized_profile.alpha[n] != initial.alpha[n]) ok = false;
            if (fix.optimized_profile.gamma[n] != initial.gamma[n]) ok = false;
        }
        report(12, "alternating optimization convergence", ok, t.seconds());
    }

    { // 13: capacity ordering across the four scenarios
        Timer t;
        bool ok = true;
        for (const ScenarioRun& r : runs) {
            if (r.art.unconstrained.capacity_bps < r.art.constrained.capacity_bps)
                ok = false;
            if (r.art.constrained.capacity_bps < r.art.non_opt.capacity_bps) ok = false;
            if (r.seconds > 1800.0) ok = false;
        }
        const ScenarioRun& tight = runs[1]; // narrow window, quarter-wave spacing
        double ratio =
            tight.art.constrained.capacity_bps / tight.art.non_opt.capacity_bps;
        if (ratio < 1.5) ok = false;
        char detail[64];
        std::snprintf(detail, sizeof(detail), "quarter-wave gain ratio %.2f", ratio);
        report(13, "capacity ordering", ok, t.seconds(), detail);
    }

    EvalArtifacts foster_eval;
    { // 14: structural specular lobe and spacing penalty
        Timer t;
        RunOptions options;
        options.out_dir = run_dir("foster_eval_a");
        options.angle_points = 1001;
        foster_eval = run_realistic_eval(sc, ProfileSource::Foster, options);
        GainMap gm = read_gain_map(foster_eval.gain_map_csv, sc.user_count());
        bool ok = gm.theta.size() == 1001;
        double two_deg = 2.0 * kPi / 180.0;
        for (int k = 0; k < sc.user_count() && ok; ++k) {
            double global = -1e300, near_best = -1e300, near_theta = 0.0;
            for (std::size_t g = 0; g < gm.theta.size(); ++g) {
                global = std::max(global, gm.db[k][g]);
                if (std::abs(gm.theta[g]) <= 2.5 * two_deg && gm.db[k][g] > near_best) {
                    near_best = gm.db[k][g];
                    near_theta = gm.theta[g];
                }
            }
            if (std::abs(near_theta) > two_deg || near_best < global - 20.0) ok = false;
        }
        // tighter element packing degrades the unoptimized link
        if (runs[1].art.non_opt.capacity_bps >= runs[0].art.non_opt.capacity_bps)
            ok = false;
        report(14, "specular lobe and spacing penalty", ok, t.seconds());
    }

    { // 15: reruns are byte-identical
        Timer t;
        RunOptions a, b;
        a.out_dir = run_dir("det_a");
        b.out_dir = run_dir("det_b");
        SweepArtifacts sa = run_ideal_sweep(sc, a);
        SweepArtifacts sb = run_ideal_sweep(sc, b);
        bool ok = slurp(sa.gain_map_csv) == slurp(sb.gain_map_csv) &&
                  slurp(sa.reactance_csv) == slurp(sb.reactance_csv);
        RunOptions c;
        c.out_dir = run_dir("foster_eval_b");
        c.angle_points = 1001;
        EvalArtifacts again = run_realistic_eval(sc, ProfileSource::Foster, c);
        if (slurp(again.gain_map_csv) != slurp(foster_eval.gain_map_csv)) ok = false;
        report(15, "byte-identical reruns", ok, t.seconds());
    }

    std::printf("%d of 15 checks passed\n", 15 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
