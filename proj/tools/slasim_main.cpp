/*
 * Copyright 2026 The slasim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slasim/slasim.hpp"

namespace {

slasim::ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw slasim::IoError("cannot read config file " + path);
    std::ostringstream text;
    text << in.rdbuf();
    auto cfg = slasim::parse_config(text.str());
    for (const auto& note : cfg.advisories) std::cerr << "advisory: " << note << "\n";
    return cfg;
}

std::vector<slasim::AdmissionPolicyKind> parse_policy_list(const std::string& list) {
    std::vector<slasim::AdmissionPolicyKind> out;
    std::istringstream in(list);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        const auto kind = slasim::admission_from_name(tok);
        if (!kind) throw slasim::ParseError(0, "policies", "unknown policy '" + tok + "'");
        out.push_back(*kind);
    }
    return out;
}

void print_summary(const slasim::ExperimentSummary& s) {
    std::printf("runs: %d, samples: %lld\n", s.runs, static_cast<long long>(s.samples));
    std::printf("revenue rate: %.4f +- %.4f per second (95%% CI)\n", s.revenue_rate.mean,
                s.revenue_rate.half_width);
    std::printf("rejection fraction: %.4f, violation fraction: %.4f\n", s.rejection_fraction,
                s.violation_fraction);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"slasim: SLA-driven server provisioning simulator"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", param, values_csv, policies_csv;
    std::string preset_name, verify_dir;
    long long seed = -1;
    long long trace_limit = -1;
    bool long_runs = false;

    auto* cmd_run = app.add_subcommand("run", "run one experiment configuration");
    cmd_run->add_option("--config", config_path, "configuration file")->required();
    cmd_run->add_option("--seed", seed, "override the master seed");
    cmd_run->add_option("--out", out_dir, "output directory");

    auto* cmd_sweep = app.add_subcommand("sweep", "sweep a parameter across policies");
    cmd_sweep->add_option("--config", config_path, "configuration file")->required();
    cmd_sweep->add_option("--param", param, "parameter path, e.g. classes[4].delta")->required();
    cmd_sweep->add_option("--values", values_csv, "comma-separated values")->required();
    cmd_sweep->add_option("--policies", policies_csv, "comma-separated admission policies");
    cmd_sweep->add_option("--out", out_dir, "output directory");

    auto* cmd_preset = app.add_subcommand("preset", "run a built-in experiment preset");
    cmd_preset->add_option("name", preset_name, "preset name, or 'list'")->required();
    cmd_preset->add_option("--out", out_dir, "output directory");
    cmd_preset->add_flag("--long", long_runs, "10x duration for tighter intervals");

    auto* cmd_verify = app.add_subcommand("verify", "recompute aggregates from per-run files");
    cmd_verify->add_option("dir", verify_dir, "experiment or sweep directory")->required();

    auto* cmd_trace = app.add_subcommand("trace", "dump the event trace of one run");
    cmd_trace->add_option("--config", config_path, "configuration file")->required();
    cmd_trace->add_option("--seed", seed, "override the master seed");
    cmd_trace->add_option("--limit", trace_limit, "stop after N records");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (cmd_run->parsed()) {
            auto cfg = load_config(config_path);
            if (seed >= 0) cfg.run.seed = static_cast<std::uint64_t>(seed);
            const auto summary = slasim::run_experiment(cfg, out_dir);
            print_summary(summary);
            std::printf("results written to %s\n", out_dir.c_str());
        } else if (cmd_sweep->parsed()) {
            auto cfg = load_config(config_path);
            if (seed >= 0) cfg.run.seed = static_cast<std::uint64_t>(seed);
            slasim::SweepSpec sweep;
            sweep.parameter = param;
            {
                std::istringstream in(values_csv);
                std::string tok;
                while (std::getline(in, tok, ','))
                    sweep.values.push_back(std::stod(tok));
            }
            sweep.policies = policies_csv.empty()
                                 ? std::vector{cfg.policy.admission}
                                 : parse_policy_list(policies_csv);
            const auto rows = slasim::run_sweep(cfg, sweep, out_dir);
            std::printf("%zu sweep rows written to %s\n", rows.size(), out_dir.c_str());
        } else if (cmd_preset->parsed()) {
            if (preset_name == "list") {
                for (const auto& p : slasim::list_presets())
                    std::printf("%-8s %s\n", p.name.c_str(), p.description.c_str());
                return 0;
            }
            auto preset = slasim::get_preset(preset_name);
            if (!preset) {
                std::cerr << "unknown preset '" << preset_name << "' (try 'preset list')\n";
                return 2;
            }
            if (long_runs) preset->config.run.duration *= 10.0;
            const std::filesystem::path dir = out_dir == "out"
                                                  ? std::filesystem::path("out") / preset->name
                                                  : std::filesystem::path(out_dir);
            slasim::run_preset(*preset, dir);
            std::printf("preset %s written to %s\n", preset->name.c_str(), dir.string().c_str());
        } else if (cmd_verify->parsed()) {
            const auto problems = slasim::verify_directory(verify_dir);
            for (const auto& p : problems) std::cerr << "mismatch: " << p << "\n";
            if (!problems.empty()) return 1;
            std::printf("aggregates verified: %s\n", verify_dir.c_str());
        } else if (cmd_trace->parsed()) {
            auto cfg = load_config(config_path);
            if (seed >= 0) cfg.run.seed = static_cast<std::uint64_t>(seed);
            cfg.run.replications = 1;
            slasim::Simulator sim(cfg, cfg.run.seed);
            long long count = 0;
            std::printf("time\tkind\tclass\tsession\tqueue_length\tbusy_servers\n");
            sim.set_trace_sink([&](const slasim::TraceRecord& r) {
                if (trace_limit >= 0 && count >= trace_limit) return;
                ++count;
                std::printf("%.6f\t%s\t%d\t%llu\t%lld\t%d\n", r.time,
                            slasim::event_kind_name(r.kind), r.class_index + 1,
                            static_cast<unsigned long long>(r.session_id),
                            static_cast<long long>(r.queue_length), r.busy_servers);
            });
            sim.run();
        }
    } catch (const slasim::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const slasim::InvalidParameter& e) {
        std::cerr << "config error (" << e.field() << "): " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
