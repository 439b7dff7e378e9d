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

#include "metaprism/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "metaprism/netlist.hpp"
#include "metaprism/parallel.hpp"

namespace mtp {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string out_path(const RunOptions& options, const std::string& name) {
    fs::create_directories(options.out_dir);
    return (fs::path(options.out_dir) / name).string();
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open for writing: " + path);
    out << std::setprecision(12);
    return out;
}

double wrap_pi(double x) { return std::remainder(x, 2.0 * kPi); }

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(clock::now() - start_).count();
    }

private:
    using clock = std::chrono::steady_clock;
    clock::time_point start_ = clock::now();
};

std::string write_manifest(const RunOptions& options, const std::string& run_name,
                           const Scenario& scenario,
                           const std::vector<std::string>& files, double seconds) {
    json m;
    m["run"] = run_name;
    m["scenario_hash"] = scenario_hash(scenario);
    std::ostringstream echo;
    write_scenario(echo, scenario);
    m["scenario"] = echo.str();
    m["outputs"] = files;
    m["wall_seconds"] = seconds;
    m["seed"] = options.seed;
    m["threads"] = thread_count();
    std::string path = out_path(options, run_name + "_manifest.json");
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open for writing: " + path);
    out << m.dump(2) << '\n';
    return path;
}

// The deployment has no feed-to-user line of sight: the TX-to-RX entry is
// removed before conversion so s_rt carries only the surface-mediated
// scattering of the matched-terminated elements.
void block_direct_path(ImpedanceMatrix& zm) {
    zm.z(0, zm.element_count + 1) = 0.0;
    zm.z(zm.element_count + 1, 0) = 0.0;
}

MultiportNetwork apply_degeneration(MultiportNetwork net, const RunOptions& options) {
    if (options.zero_coupling) net = net.without_coupling();
    if (options.zero_structural) net = net.without_structural();
    return net;
}

// User-slot networks honouring the model selection flags.
std::vector<MultiportNetwork> model_user_networks(const Scenario& scenario,
                                                  const RunOptions& options) {
    std::vector<MultiportNetwork> nets =
        options.ideal_model ? build_ideal_networks(scenario)
                            : build_user_networks(scenario, options.per_frequency);
    for (MultiportNetwork& net : nets) net = apply_degeneration(net, options);
    return nets;
}

// Reflection phase matrix (K x N) for the requested source.
Eigen::MatrixXd source_phases(const Scenario& scenario, ProfileSource source,
                              const RunOptions& options) {
    int k_count = scenario.user_count();
    MtpGeometry geom = scenario.geometry();
    AngleFrequencyMap map = scenario.mapping(k_count);
    const BandPlan& band = map.band();
    switch (source) {
    case ProfileSource::Ideal: {
        PhaseProfile profile =
            ideal_profile(geom, map, scenario.incidence(), scenario.phi_rad,
                          scenario.psi0_rad);
        return profile.psi(band);
    }
    case ProfileSource::File: {
        if (options.profile_file.empty())
            throw validation_error("profile source 'file' needs a profile path");
        PhaseProfile profile = read_profile_csv(options.profile_file);
        if (profile.element_count() != geom.element_count())
            throw validation_error("profile file element count mismatch");
        return profile.psi(band);
    }
    case ProfileSource::Foster: {
        Eigen::MatrixXd psi(k_count, geom.element_count());
        FitOptions fit;
        fit.z0 = scenario.z0_ohm;
        std::vector<FosterCircuit> circuits(geom.element_count());
        parallel_for(geom.element_count(), [&](int n) {
            PolePlan plan = plan_poles(geom, map, scenario.incidence(), scenario.phi_rad,
                                       n, scenario.psi0_rad);
            circuits[n] = fit_inductances(geom, map, scenario.incidence(),
                                          scenario.phi_rad, plan, fit);
        });
        for (int k = 0; k < k_count; ++k)
            for (int n = 0; n < geom.element_count(); ++n) {
                double x = realized_reactance(circuits[n], band.frequency(k));
                psi(k, n) = std::arg(reflection_coefficient(x, scenario.z0_ohm));
            }
        return psi;
    }
    }
    throw validation_error("unknown profile source");
}

} // namespace

std::vector<MultiportNetwork> build_user_networks(const Scenario& scenario,
                                                  bool per_frequency) {
    scenario.validate();
    int k_count = scenario.user_count();
    MtpGeometry geom = scenario.geometry();
    AngleFrequencyMap map = scenario.mapping(k_count);
    DipoleSpec spec = scenario.dipole();
    Eigen::Vector3d tx = radial_position(scenario.incidence(), scenario.tx_distance_m);
    std::vector<MultiportNetwork> nets(k_count);
    for (int k = 0; k < k_count; ++k) {
        double f_k = map.band().frequency(k);
        double f_eval = per_frequency ? f_k : scenario.f0_hz;
        Direction user{map.angle_at(f_k), scenario.phi_rad};
        Eigen::Vector3d rx = radial_position(user, scenario.rx_distance_m);
        ImpedanceMatrix zm = build_impedance_matrix(geom, spec, tx, rx, f_eval);
        block_direct_path(zm);
        nets[k] = z_to_s_partition(zm, scenario.z0_ohm);
        nets[k].frequency_hz = f_k;
    }
    return nets;
}

MultiportNetwork build_observer_network(const Scenario& scenario, const Direction& rx_dir,
                                        double frequency_hz) {
    Eigen::Vector3d tx = radial_position(scenario.incidence(), scenario.tx_distance_m);
    Eigen::Vector3d rx = radial_position(rx_dir, scenario.rx_distance_m);
    ImpedanceMatrix zm = build_impedance_matrix(scenario.geometry(), scenario.dipole(),
                                                tx, rx, frequency_hz);
    block_direct_path(zm);
    return z_to_s_partition(zm, scenario.z0_ohm);
}

MultiportNetwork build_ideal_observer_network(const Scenario& scenario,
                                              const Direction& rx_dir) {
    MtpGeometry geom = scenario.geometry();
    double lambda0 = kSpeedOfLight / scenario.f0_hz;
    // one free-space amplitude per hop; phases are the plane-wave responses
    double g_mt = lambda0 / (4.0 * kPi * scenario.tx_distance_m);
    double g_rm = lambda0 / (4.0 * kPi * scenario.rx_distance_m);
    MultiportNetwork net;
    net.s_mt = g_mt * array_response(geom, scenario.incidence(), scenario.f0_hz);
    net.s_rm = g_rm * array_response(geom, rx_dir, scenario.f0_hz).transpose();
    net.s_rt = 0.0;
    net.s_ss = Eigen::MatrixXcd::Zero(geom.element_count(), geom.element_count());
    net.frequency_hz = scenario.f0_hz;
    return net;
}

std::vector<MultiportNetwork> build_ideal_networks(const Scenario& scenario) {
    scenario.validate();
    int k_count = scenario.user_count();
    AngleFrequencyMap map = scenario.mapping(k_count);
    std::vector<MultiportNetwork> nets(k_count);
    for (int k = 0; k < k_count; ++k) {
        double f_k = map.band().frequency(k);
        nets[k] = build_ideal_observer_network(
            scenario, {map.angle_at(f_k), scenario.phi_rad});
        nets[k].frequency_hz = f_k;
    }
    return nets;
}

SweepArtifacts run_ideal_sweep(const Scenario& scenario, const RunOptions& options) {
    Stopwatch watch;
    scenario.validate();
    if (options.angle_points < 3) throw validation_error("angle grid too small");
    int k_count = scenario.user_count();
    MtpGeometry geom = scenario.geometry();
    AngleFrequencyMap map = scenario.mapping(k_count);
    const BandPlan& band = map.band();

    SweepArtifacts art;
    art.gain_map_csv = out_path(options, "ideal_gain_map.csv");
    std::ofstream gain = open_csv(art.gain_map_csv);
    gain << "theta_rad,f_hz,gain_db,phase_rad\n";
    art.peak_theta_rad.resize(k_count);
    for (int k = 0; k < k_count; ++k) {
        double f_k = band.frequency(k);
        Eigen::VectorXcd gamma(geom.element_count());
        for (int n = 0; n < geom.element_count(); ++n)
            gamma[n] = std::polar(1.0, ideal_phase(geom, map, scenario.incidence(),
                                                   scenario.phi_rad, f_k, n,
                                                   scenario.psi0_rad));
        double best = -1.0;
        for (int g = 0; g < options.angle_points; ++g) {
            double theta = -kPi / 2.0 + kPi * g / (options.angle_points - 1);
            cplx h = ideal_channel_gain(geom, gamma, scenario.incidence(),
                                        {theta, scenario.phi_rad}, band.f0);
            gain << theta << ',' << f_k << ',' << power_to_db(std::norm(h)) << ','
                 << std::arg(h) << '\n';
            if (std::abs(h) > best) { best = std::abs(h); art.peak_theta_rad[k] = theta; }
        }
    }

    art.reactance_csv = out_path(options, "ideal_reactance.csv");
    std::ofstream react = open_csv(art.reactance_csv);
    react << "element,f_hz,x_ohm\n";
    for (int n = 0; n < geom.element_count(); ++n)
        for (int i = 0; i < 201; ++i) {
            double f = band.low() + band.width * i / 200.0;
            double psi = ideal_phase(geom, map, scenario.incidence(), scenario.phi_rad,
                                     f, n, scenario.psi0_rad);
            react << n << ',' << f << ',' << ideal_reactance(psi, scenario.z0_ohm)
                  << '\n';
        }

    art.bw = bandwidth(geom, map, scenario.droop, scenario.phi_rad);
    json report;
    report["mapping"] = {{"alpha_per_hz", map.alpha()},
                         {"gamma", map.gamma()},
                         {"theta_min_rad", map.theta_min()},
                         {"theta_max_rad", map.theta_max()}};
    report["bandwidth"] = {{"droop", art.bw.omega},
                           {"exact_hz", art.bw.exact_hz},
                           {"approx_hz", art.bw.approx_hz},
                           {"first_null_hz", art.bw.first_null_hz}};
    report["beam_peaks_rad"] = art.peak_theta_rad;
    art.report_json = out_path(options, "ideal_report.json");
    std::ofstream rep(art.report_json);
    rep << report.dump(2) << '\n';

    art.manifest_json = write_manifest(options, "sweep_ideal", scenario,
                                       {art.gain_map_csv, art.reactance_csv,
                                        art.report_json},
                                       watch.seconds());
    return art;
}

SynthesisArtifacts run_synthesis(const Scenario& scenario, const RunOptions& options) {
    Stopwatch watch;
    scenario.validate();
    int k_count = scenario.user_count();
    MtpGeometry geom = scenario.geometry();
    AngleFrequencyMap map = scenario.mapping(k_count);
    const BandPlan& band = map.band();
    int n_count = geom.element_count();

    FitOptions fit;
    fit.z0 = scenario.z0_ohm;
    double mask = default_mask_halfwidth(geom, map);

    SynthesisArtifacts art;
    art.circuits.resize(n_count);
    art.rms_phase_error_rad.resize(n_count);
    art.rms_reactance_rel_error.resize(n_count);
    std::vector<PolePlan> plans(n_count);
    parallel_for(n_count, [&](int n) {
        plans[n] = plan_poles(geom, map, scenario.incidence(), scenario.phi_rad, n,
                              scenario.psi0_rad);
        art.circuits[n] = fit_inductances(geom, map, scenario.incidence(),
                                          scenario.phi_rad, plans[n], fit);
        // fit residuals on the unmasked fit grid
        double sq_phase = 0.0, sq_x = 0.0, sq_ref = 0.0;
        int used = 0;
        for (int i = 0; i < fit.grid_points; ++i) {
            double f = band.low() + band.width * i / (fit.grid_points - 1);
            bool masked = false;
            for (double fp : plans[n].poles_hz)
                if (std::abs(f - fp) < mask) { masked = true; break; }
            if (masked) continue;
            double psi_t = ideal_phase(geom, map, scenario.incidence(), scenario.phi_rad,
                                       f, n, scenario.psi0_rad);
            double x_t = ideal_reactance(psi_t, scenario.z0_ohm);
            if (!std::isfinite(x_t)) continue;
            double x_r = realized_reactance(art.circuits[n], f);
            double psi_r = std::arg(reflection_coefficient(x_r, scenario.z0_ohm));
            sq_x += (x_r - x_t) * (x_r - x_t);
            sq_ref += x_t * x_t;
            sq_phase += std::pow(wrap_pi(psi_r - psi_t), 2);
            ++used;
        }
        art.rms_phase_error_rad[n] = used ? std::sqrt(sq_phase / used) : 0.0;
        art.rms_reactance_rel_error[n] =
            sq_ref > 0.0 ? std::sqrt(sq_x / sq_ref) : 0.0;
    });

    fs::path net_dir = fs::path(options.out_dir) / "netlists";
    fs::create_directories(net_dir);
    std::ofstream circuits_csv;
    art.circuits_csv = out_path(options, "circuits.csv");
    circuits_csv = open_csv(art.circuits_csv);
    circuits_csv << "element,section,pole_hz,l_henry,c_farad\n";
    for (int n = 0; n < n_count; ++n) {
        if (!art.circuits[n].realizable) {
            art.unrealizable_elements.push_back(n);
            continue;
        }
        std::ostringstream name;
        name << "MTP_LOAD_" << std::setw(4) << std::setfill('0') << n;
        std::string file = (net_dir / (name.str() + ".cir")).string();
        write_netlist(file, art.circuits[n], name.str());
        art.netlist_files.push_back(file);
        for (std::size_t s = 0; s < art.circuits[n].sections.size(); ++s) {
            const FosterSection& sec = art.circuits[n].sections[s];
            circuits_csv << n << ',' << s << ',' << sec.resonance_hz() << ','
                         << sec.l_henry << ',' << sec.c_farad << '\n';
        }
    }

    json report;
    report["elements"] = n_count;
    report["mask_halfwidth_hz"] = mask;
    report["rms_phase_error_rad"] = art.rms_phase_error_rad;
    report["rms_reactance_rel_error"] = art.rms_reactance_rel_error;
    report["unrealizable_elements"] = art.unrealizable_elements;
    art.report_json = out_path(options, "synthesis_report.json");
    std::ofstream rep(art.report_json);
    rep << report.dump(2) << '\n';

    std::vector<std::string> files = art.netlist_files;
    files.push_back(art.circuits_csv);
    files.push_back(art.report_json);
    art.manifest_json =
        write_manifest(options, "synth", scenario, files, watch.seconds());
    return art;
}

EvalArtifacts run_realistic_eval(const Scenario& scenario, ProfileSource source,
                                 const RunOptions& options) {
    Stopwatch watch;
    scenario.validate();
    if (options.angle_points < 3) throw validation_error("angle grid too small");
    int k_count = scenario.user_count();
    MtpGeometry geom = scenario.geometry();
    AngleFrequencyMap map = scenario.mapping(k_count);
    const BandPlan& band = map.band();
    int n_count = geom.element_count();

    Eigen::MatrixXd psi = source_phases(scenario, source, options);
    std::vector<Eigen::VectorXcd> gammas(k_count);
    for (int k = 0; k < k_count; ++k) {
        gammas[k].resize(n_count);
        for (int n = 0; n < n_count; ++n) gammas[k][n] = std::polar(1.0, psi(k, n));
    }

    // gain map over observer directions; only the receiver row of the
    // impedance matrix depends on the observation angle
    int points = options.angle_points;
    DipoleSpec spec = scenario.dipole();
    Eigen::Vector3d tx = radial_position(scenario.incidence(), scenario.tx_distance_m);
    ImpedanceMatrix base = build_impedance_matrix(
        geom, spec, tx, radial_position({0.0, scenario.phi_rad}, scenario.rx_distance_m),
        scenario.f0_hz);
    std::vector<Eigen::Vector3d> fixed(n_count + 1);
    fixed[0] = tx;
    for (int i = 0; i < n_count; ++i) fixed[i + 1] = geom.position(i);
    Eigen::MatrixXd gain_db(points, k_count);
    Eigen::MatrixXd phase(points, k_count);
    parallel_for(points, [&](int g) {
        double theta = -kPi / 2.0 + kPi * g / (points - 1);
        MultiportNetwork net;
        if (options.ideal_model) {
            net = build_ideal_observer_network(scenario, {theta, scenario.phi_rad});
        } else {
            Eigen::Vector3d rx =
                radial_position({theta, scenario.phi_rad}, scenario.rx_distance_m);
            ImpedanceMatrix zm = base;
            int r = n_count + 1;
            for (int b = 1; b < r; ++b) {
                cplx z = mutual_impedance(spec, fixed[b], rx, scenario.f0_hz);
                zm.z(r, b) = z;
                zm.z(b, r) = z;
            }
            block_direct_path(zm);
            net = apply_degeneration(z_to_s_partition(zm, scenario.z0_ohm), options);
        }
        for (int k = 0; k < k_count; ++k) {
            cplx h = realistic_channel(net, gammas[k]);
            gain_db(g, k) = power_to_db(std::norm(h));
            phase(g, k) = std::arg(h);
        }
    });

    EvalArtifacts art;
    art.gain_map_csv = out_path(options, "realistic_gain_map.csv");
    std::ofstream gain = open_csv(art.gain_map_csv);
    gain << "theta_rad,f_hz,gain_db,phase_rad\n";
    art.peak_theta_rad.resize(k_count);
    for (int k = 0; k < k_count; ++k) {
        double best = -1e300;
        for (int g = 0; g < points; ++g) {
            double theta = -kPi / 2.0 + kPi * g / (points - 1);
            gain << theta << ',' << band.frequency(k) << ',' << gain_db(g, k) << ','
                 << phase(g, k) << '\n';
            if (gain_db(g, k) > best) { best = gain_db(g, k); art.peak_theta_rad[k] = theta; }
        }
    }

    std::vector<MultiportNetwork> nets = model_user_networks(scenario, options);
    art.capacity = capacity(nets, band, psi, dbm_to_watt(scenario.tx_power_dbm),
                            dbm_to_watt(scenario.noise_dbm_hz));

    json report;
    report["capacity_bps"] = art.capacity.capacity_bps;
    report["capacity_bits_per_hz"] = art.capacity.capacity_bps / band.width;
    report["per_user_rates_bps"] = art.capacity.rates_bps;
    report["per_user_gains"] = art.capacity.gains;
    report["beam_peaks_rad"] = art.peak_theta_rad;
    art.report_json = out_path(options, "realistic_report.json");
    std::ofstream rep(art.report_json);
    rep << report.dump(2) << '\n';

    art.manifest_json = write_manifest(options, "eval", scenario,
                                       {art.gain_map_csv, art.report_json},
                                       watch.seconds());
    return art;
}

OptimizeArtifacts run_optimize(const Scenario& scenario, const RunOptions& options) {
    Stopwatch watch;
    scenario.validate();
    int k_count = scenario.user_count();
    MtpGeometry geom = scenario.geometry();
    AngleFrequencyMap map = scenario.mapping(k_count);
    const BandPlan& band = map.band();

    std::vector<MultiportNetwork> nets = model_user_networks(scenario, options);

    double p_t = dbm_to_watt(scenario.tx_power_dbm);
    double n_0 = dbm_to_watt(scenario.noise_dbm_hz);
    PhaseProfile initial = ideal_profile(geom, map, scenario.incidence(),
                                         scenario.phi_rad, scenario.psi0_rad);

    OptimizeOptions opt;
    opt.grid = SearchGrid::for_design(geom, map, options.n_alpha, options.n_gamma);
    opt.epsilon = options.epsilon;
    opt.max_outer = options.max_outer;

    OptimizeArtifacts art;
    art.non_opt = capacity(nets, band, initial.psi(band), p_t, n_0);

    bool run_constrained = options.mode != OptimizeMode::Unconstrained;
    bool run_nc = options.mode != OptimizeMode::Constrained;
    if (run_constrained) {
        OptimizeResult res = optimize(nets, band, initial, opt, p_t, n_0);
        art.constrained = res.report;
        art.optimized_profile = res.profile;
        art.profile_csv = out_path(options, "optimized_profile.csv");
        write_profile_csv(art.profile_csv, res.profile);
        art.trace_csv = out_path(options, "optimize_trace.csv");
        std::ofstream trace = open_csv(art.trace_csv);
        trace << "iteration,capacity_bps\n";
        for (std::size_t q = 0; q < res.report.trace_bps.size(); ++q)
            trace << q << ',' << res.report.trace_bps[q] << '\n';
    }
    if (run_nc) {
        UnconstrainedResult res = optimize_unconstrained(nets, band, initial.psi(band),
                                                         opt, p_t, n_0);
        art.unconstrained = res.report;
    }

    art.capacity_csv = out_path(options, "capacity_summary.csv");
    std::ofstream summary = open_csv(art.capacity_csv);
    summary << "profile,capacity_bps,capacity_bits_per_hz\n";
    summary << "non_opt," << art.non_opt.capacity_bps << ','
            << art.non_opt.capacity_bps / band.width << '\n';
    if (run_constrained)
        summary << "optimized," << art.constrained.capacity_bps << ','
                << art.constrained.capacity_bps / band.width << '\n';
    if (run_nc)
        summary << "unconstrained," << art.unconstrained.capacity_bps << ','
                << art.unconstrained.capacity_bps / band.width << '\n';

    json report;
    report["non_opt_bps"] = art.non_opt.capacity_bps;
    if (run_constrained) {
        report["optimized_bps"] = art.constrained.capacity_bps;
        report["optimized_converged"] = art.constrained.converged;
        report["optimized_iterations"] = art.constrained.iterations;
        report["optimized_mu"] = art.constrained.mu;
        if (!art.constrained.converged)
            report["warnings"] = {"iteration cap reached before convergence"};
    }
    if (run_nc) {
        report["unconstrained_bps"] = art.unconstrained.capacity_bps;
        report["unconstrained_converged"] = art.unconstrained.converged;
    }
    art.report_json = out_path(options, "optimize_report.json");
    std::ofstream rep(art.report_json);
    rep << report.dump(2) << '\n';

    std::vector<std::string> files{art.capacity_csv, art.report_json};
    if (run_constrained) {
        files.push_back(art.profile_csv);
        files.push_back(art.trace_csv);
    }
    art.manifest_json =
        write_manifest(options, "optimize", scenario, files, watch.seconds());
    return art;
}

void write_profile_csv(const std::string& path, const PhaseProfile& profile) {
    std::ofstream out(path);
    if (!out) throw validation_error("cannot open for writing: " + path);
    out << std::setprecision(17);
    out << "element,alpha_rad_per_hz,gamma_rad\n";
    for (int n = 0; n < profile.element_count(); ++n)
        out << n << ',' << profile.alpha[n] << ',' << profile.gamma[n] << '\n';
}

PhaseProfile read_profile_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open for reading: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("element,", 0) != 0)
        throw validation_error("not a profile CSV: " + path);
    std::vector<double> alpha, gamma;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream row(line);
        std::string tok;
        std::getline(row, tok, ','); // element index, ordered
        std::getline(row, tok, ',');
        alpha.push_back(std::stod(tok));
        if (!std::getline(row, tok, ',')) throw validation_error("short profile row");
        gamma.push_back(std::stod(tok));
    }
    PhaseProfile profile;
    profile.alpha = Eigen::Map<Eigen::VectorXd>(alpha.data(), alpha.size());
    profile.gamma = Eigen::Map<Eigen::VectorXd>(gamma.data(), gamma.size());
    return profile;
}

} // namespace mtp
