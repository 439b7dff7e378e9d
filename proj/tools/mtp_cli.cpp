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

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "metaprism/runner.hpp"

namespace {

struct CommonArgs {
    std::string scenario_file;
    std::vector<std::string> overrides; // key=value pairs merged onto the file
    mtp::RunOptions options;
};

mtp::Scenario resolve_scenario(const CommonArgs& args) {
    std::ostringstream merged;
    if (!args.scenario_file.empty()) {
        std::ifstream in(args.scenario_file);
        if (!in)
            throw mtp::validation_error("cannot open scenario file: " + args.scenario_file);
        merged << in.rdbuf() << '\n';
    }
    for (const std::string& kv : args.overrides) merged << kv << '\n';
    std::istringstream in(merged.str());
    return mtp::load_scenario(in);
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-s,--scenario", args.scenario_file, "scenario file (key = value)");
    cmd->add_option("-D,--set", args.overrides, "override one scenario key, key=value");
    cmd->add_option("-o,--out-dir", args.options.out_dir, "output directory");
}

void add_model_flags(CLI::App* cmd, CommonArgs& args, std::string& model) {
    cmd->add_option("--model", model, "channel model: multiport or ideal")
        ->check(CLI::IsMember({"multiport", "ideal"}));
    cmd->add_flag("--zero-coupling", args.options.zero_coupling,
                  "zero the element-to-element scattering block");
    cmd->add_flag("--zero-structural", args.options.zero_structural,
                  "zero the direct feed-to-receiver path");
    cmd->add_flag("--per-frequency", args.options.per_frequency,
                  "rebuild the network blocks at every frequency slot");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"metaprism: frequency-selective reflecting surface toolkit"};
    app.require_subcommand(1);

    CommonArgs sweep_args;
    CLI::App* sweep = app.add_subcommand("sweep-ideal",
                                         "angle-frequency gain map of the ideal design");
    add_common(sweep, sweep_args);
    sweep->add_option("--angle-points", sweep_args.options.angle_points,
                      "observation grid size over [-90 deg, 90 deg]");

    CommonArgs synth_args;
    CLI::App* synth = app.add_subcommand("synth", "fit reactive loads and emit netlists");
    add_common(synth, synth_args);

    CommonArgs eval_args;
    std::string eval_model = "multiport";
    std::string eval_source = "ideal";
    CLI::App* eval = app.add_subcommand("eval", "evaluate a load profile on the coupled model");
    add_common(eval, eval_args);
    add_model_flags(eval, eval_args, eval_model);
    eval->add_option("--profile", eval_source, "load profile: ideal, foster, or file")
        ->check(CLI::IsMember({"ideal", "foster", "file"}));
    eval->add_option("--profile-file", eval_args.options.profile_file,
                     "profile CSV for --profile file");
    eval->add_option("--angle-points", eval_args.options.angle_points,
                     "observation grid size over [-90 deg, 90 deg]");

    CommonArgs opt_args;
    std::string opt_model = "multiport";
    std::string opt_mode = "both";
    CLI::App* opt = app.add_subcommand("optimize",
                                       "alternating optimization of the phase profile");
    add_common(opt, opt_args);
    add_model_flags(opt, opt_args, opt_model);
    opt->add_option("--mode", opt_mode, "constrained, unconstrained, or both")
        ->check(CLI::IsMember({"constrained", "unconstrained", "both"}));
    opt->add_option("--n-alpha", opt_args.options.n_alpha, "slope grid size");
    opt->add_option("--n-gamma", opt_args.options.n_gamma, "offset grid size");
    opt->add_option("--epsilon", opt_args.options.epsilon, "relative convergence threshold");
    opt->add_option("--max-outer", opt_args.options.max_outer, "outer iteration cap");

    std::string report_file;
    CLI::App* report = app.add_subcommand("report", "print a run report JSON");
    report->add_option("file", report_file, "report or manifest JSON")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) {
            mtp::Scenario sc = resolve_scenario(sweep_args);
            mtp::SweepArtifacts art = run_ideal_sweep(sc, sweep_args.options);
            std::cout << "gain map:  " << art.gain_map_csv << '\n'
                      << "reactance: " << art.reactance_csv << '\n'
                      << "bandwidth: " << art.bw.exact_hz / 1e6 << " MHz exact, "
                      << art.bw.approx_hz / 1e6 << " MHz closed form\n"
                      << "manifest:  " << art.manifest_json << '\n';
        } else if (*synth) {
            mtp::Scenario sc = resolve_scenario(synth_args);
            mtp::SynthesisArtifacts art = run_synthesis(sc, synth_args.options);
            std::cout << "netlists:  " << art.netlist_files.size() << " files\n"
                      << "circuits:  " << art.circuits_csv << '\n'
                      << "manifest:  " << art.manifest_json << '\n';
            if (!art.unrealizable_elements.empty()) {
                std::cout << "unrealizable elements:";
                for (int n : art.unrealizable_elements) std::cout << ' ' << n;
                std::cout << '\n';
            }
        } else if (*eval) {
            mtp::Scenario sc = resolve_scenario(eval_args);
            eval_args.options.ideal_model = (eval_model == "ideal");
            mtp::ProfileSource source = mtp::ProfileSource::Ideal;
            if (eval_source == "foster") source = mtp::ProfileSource::Foster;
            else if (eval_source == "file") source = mtp::ProfileSource::File;
            mtp::EvalArtifacts art = run_realistic_eval(sc, source, eval_args.options);
            std::cout << "gain map:  " << art.gain_map_csv << '\n'
                      << "capacity:  " << art.capacity.capacity_bps / 1e6 << " Mbps\n"
                      << "manifest:  " << art.manifest_json << '\n';
        } else if (*opt) {
            mtp::Scenario sc = resolve_scenario(opt_args);
            opt_args.options.ideal_model = (opt_model == "ideal");
            if (opt_mode == "constrained")
                opt_args.options.mode = mtp::OptimizeMode::Constrained;
            else if (opt_mode == "unconstrained")
                opt_args.options.mode = mtp::OptimizeMode::Unconstrained;
            mtp::OptimizeArtifacts art = run_optimize(sc, opt_args.options);
            std::cout << "non-optimized: " << art.non_opt.capacity_bps / 1e6 << " Mbps\n";
            if (opt_args.options.mode != mtp::OptimizeMode::Unconstrained)
                std::cout << "optimized:     " << art.constrained.capacity_bps / 1e6
                          << " Mbps (" << art.constrained.iterations << " iterations)\n";
            if (opt_args.options.mode != mtp::OptimizeMode::Constrained)
                std::cout << "unconstrained: " << art.unconstrained.capacity_bps / 1e6
                          << " Mbps\n";
            std::cout << "manifest:      " << art.manifest_json << '\n';
        } else if (*report) {
            std::ifstream in(report_file);
            if (!in) throw mtp::validation_error("cannot open report: " + report_file);
            nlohmann::json j;
            in >> j;
            std::cout << j.dump(2) << '\n';
        }
    } catch (const mtp::validation_error& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const mtp::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    } catch (const mtp::synthesis_error& e) {
        std::cerr << "synthesis error: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
