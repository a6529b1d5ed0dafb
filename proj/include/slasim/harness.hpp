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

#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "slasim/config.hpp"
#include "slasim/metrics.hpp"
#include "slasim/presets.hpp"
#include "slasim/sim.hpp"

namespace slasim {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MissingColumns : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One swept parameter with the policy set to compare at each value.
struct SweepSpec {
    std::string parameter;  // e.g. "classes[4].delta" (1-based class ids)
    std::vector<double> values;
    std::vector<AdmissionPolicyKind> policies;
};

/// Replication-pooled aggregate of one experiment configuration.
struct ExperimentSummary {
    int runs = 0;
    std::int64_t samples = 0;
    ConfidenceInterval revenue_rate;  // over all 10-minute samples, pooled
    double rejection_fraction = 0.0;
    double violation_fraction = 0.0;
    double inflight_projected_rate = 0.0;  // mean over runs
    std::vector<double> accept_rate;    // per class, sessions admitted per second
    std::vector<double> complete_rate;  // per class, sessions completed per second
};

struct SweepRow {
    AdmissionPolicyKind policy = AdmissionPolicyKind::AdmitAll;
    double value = 0.0;
    double rho_total = 0.0;
    double revenue_mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double reject_frac = 0.0;
    double violation_frac = 0.0;
    std::vector<double> accept_rate;
};

// --- parameter paths ----------------------------------------------------------

/// Applies "section.key" / "classes[i].field" sweep paths to a configuration.
inline void apply_parameter(ExperimentConfig& cfg, const std::string& path, double value) {
    if (path.rfind("classes[", 0) == 0) {
        const auto close = path.find(']');
        if (close == std::string::npos) throw std::invalid_argument("bad parameter: " + path);
        const int id = std::stoi(path.substr(8, close - 8));
        if (id < 1 || static_cast<std::size_t>(id) > cfg.classes.size())
            throw std::invalid_argument("parameter class out of range: " + path);
        const std::string field = path.substr(close + 2);  // skip "]."
        ClassConfig& cc = cfg.classes[static_cast<std::size_t>(id - 1)];
        if (field == "delta") {
            cc.traffic.delta = value;
        } else if (field == "gamma") {
            cc.service.job_rate = value;
        } else if (field == "b") {
            cc.service.mean_service_time = value;
        } else if (field == "alpha") {
            cc.service.importance = value;
        } else {
            throw std::invalid_argument("unknown class field in parameter: " + path);
        }
        return;
    }
    if (path == "cluster.servers") {
        cfg.cluster.servers = static_cast<int>(value);
    } else if (path == "cluster.switch_delay") {
        cfg.cluster.switch_delay = value;
    } else if (path == "run.duration") {
        cfg.run.duration = value;
    } else if (path == "policy.window_events") {
        cfg.policy.window_events = static_cast<std::int64_t>(value);
    } else if (path == "policy.ewma_beta") {
        cfg.policy.ewma_beta = value;
    } else if (path == "policy.epsilon") {
        cfg.policy.epsilon = value;
    } else {
        throw std::invalid_argument("unknown parameter path: " + path);
    }
}

/// Sweep CSV column name for a parameter path: classes[4].delta -> delta4.
inline std::string sweep_column_name(const std::string& path) {
    if (path.rfind("classes[", 0) == 0) {
        const auto close = path.find(']');
        const std::string id = path.substr(8, close - 8);
        const std::string field = path.substr(close + 2);
        return field + id;
    }
    std::string out;
    for (char c : path) out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    return out;
}

// --- replications ---------------------------------------------------------------

/// Runs the configured number of replications, each under a seed derived from
/// the master seed and the run index. Replications run on a small worker pool;
/// results are merged by run index, so the outcome does not depend on timing.
inline std::vector<RunResult> run_replications(const ExperimentConfig& cfg) {
    const int n = cfg.run.replications;
    std::vector<RunResult> results(static_cast<std::size_t>(n));
    const unsigned workers =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                           static_cast<unsigned>(n));
    std::atomic<int> next{0};
    const auto worker = [&]() {
        for (;;) {
            const int idx = next.fetch_add(1);
            if (idx >= n) return;
            const std::uint64_t seed =
                replication_seed(cfg.run.seed, static_cast<std::uint64_t>(idx));
            results[static_cast<std::size_t>(idx)] = run_simulation(cfg, seed);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::future<void>> futs;
        for (unsigned w = 0; w < workers; ++w)
            futs.push_back(std::async(std::launch::async, worker));
        for (auto& f : futs) f.get();
    }
    return results;
}

inline ExperimentSummary summarize(const ExperimentConfig& cfg,
                                   const std::vector<RunResult>& results) {
    ExperimentSummary s;
    s.runs = static_cast<int>(results.size());
    const std::size_t m = cfg.num_classes();
    s.accept_rate.assign(m, 0.0);
    s.complete_rate.assign(m, 0.0);

    std::vector<double> rates;
    std::int64_t arrivals = 0, rejected = 0, completed = 0, violated = 0;
    double inflight = 0.0;
    const double total_time = cfg.run.duration * static_cast<double>(results.size());
    for (const RunResult& r : results) {
        for (const MetricsSample& smp : r.samples) rates.push_back(smp.revenue_rate);
        for (std::size_t c = 0; c < m; ++c) {
            arrivals += r.accepted[c] + r.rejected[c];
            rejected += r.rejected[c];
            completed += r.completed[c];
            violated += r.violated[c];
            if (total_time > 0.0) {
                s.accept_rate[c] += static_cast<double>(r.accepted[c]) / total_time;
                s.complete_rate[c] += static_cast<double>(r.completed[c]) / total_time;
            }
        }
        inflight += r.inflight_projected_rate();
    }
    s.samples = static_cast<std::int64_t>(rates.size());
    if (rates.size() >= 2) {
        s.revenue_rate = student_t_ci(rates);
    } else if (rates.size() == 1) {
        s.revenue_rate = ConfidenceInterval{rates[0], 0.0};
    }
    if (arrivals > 0)
        s.rejection_fraction = static_cast<double>(rejected) / static_cast<double>(arrivals);
    if (completed > 0)
        s.violation_fraction = static_cast<double>(violated) / static_cast<double>(completed);
    if (!results.empty()) s.inflight_projected_rate = inflight / static_cast<double>(results.size());
    return s;
}

// --- CSV ------------------------------------------------------------------------

namespace csv {

inline std::string money(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

inline std::string real(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    return buf;
}

inline std::string value(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

/// Rows of a comma-separated file, '#' comment lines skipped.
inline std::vector<std::vector<std::string>> read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> row;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) row.push_back(cell);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::size_t column(const std::vector<std::string>& header, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw MissingColumns("missing column '" + name + "'");
}

}  // namespace csv

inline void write_samples_csv(const std::filesystem::path& path, const RunResult& r,
                              std::size_t num_classes) {
    auto out = csv::open_out(path);
    out << "# slasim samples v1\n";
    out << "sample,t_start,t_end,revenue,revenue_rate,accepted,rejected,completed,violated";
    for (std::size_t c = 0; c < num_classes; ++c) out << ",accept_rate_" << (c + 1);
    for (std::size_t c = 0; c < num_classes; ++c) out << ",complete_rate_" << (c + 1);
    out << "\n";
    for (const MetricsSample& s : r.samples) {
        out << s.index << ',' << csv::real(s.t_start) << ',' << csv::real(s.t_end) << ','
            << csv::money(s.revenue) << ',' << csv::real(s.revenue_rate) << ',' << s.accepted
            << ',' << s.rejected << ',' << s.completed << ',' << s.violated;
        for (std::size_t c = 0; c < num_classes; ++c) out << ',' << csv::real(s.accept_rate[c]);
        for (std::size_t c = 0; c < num_classes; ++c) out << ',' << csv::real(s.complete_rate[c]);
        out << "\n";
    }
}

inline void write_runs_csv(const std::filesystem::path& path,
                           const std::vector<RunResult>& results, std::size_t num_classes) {
    auto out = csv::open_out(path);
    out << "# slasim runs v1\n";
    out << "run,seed,duration,revenue,revenue_rate,inflight_projected_rate,accepted,rejected,"
           "completed,violated";
    for (std::size_t c = 0; c < num_classes; ++c) out << ",accepted_" << (c + 1);
    for (std::size_t c = 0; c < num_classes; ++c) out << ",completed_" << (c + 1);
    out << "\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const RunResult& r = results[i];
        std::int64_t rejected = 0, violated = 0;
        for (auto v : r.rejected) rejected += v;
        for (auto v : r.violated) violated += v;
        out << i << ',' << r.seed << ',' << csv::real(r.duration) << ',' << csv::money(r.revenue)
            << ',' << csv::real(r.revenue_rate()) << ',' << csv::real(r.inflight_projected_rate())
            << ',' << r.total_accepted() << ',' << rejected << ',' << r.total_completed() << ','
            << violated;
        for (std::size_t c = 0; c < num_classes; ++c) out << ',' << r.accepted[c];
        for (std::size_t c = 0; c < num_classes; ++c) out << ',' << r.completed[c];
        out << "\n";
    }
}

inline void write_aggregate_csv(const std::filesystem::path& path, const ExperimentSummary& s) {
    auto out = csv::open_out(path);
    out << "# slasim aggregate v1\n";
    out << "runs,samples,revenue_mean,ci_half,ci_low,ci_high,reject_frac,violation_frac,"
           "inflight_rate_mean";
    for (std::size_t c = 0; c < s.accept_rate.size(); ++c) out << ",accept_rate_" << (c + 1);
    for (std::size_t c = 0; c < s.complete_rate.size(); ++c) out << ",complete_rate_" << (c + 1);
    out << "\n";
    out << s.runs << ',' << s.samples << ',' << csv::real(s.revenue_rate.mean) << ','
        << csv::real(s.revenue_rate.half_width) << ',' << csv::real(s.revenue_rate.low()) << ','
        << csv::real(s.revenue_rate.high()) << ',' << csv::real(s.rejection_fraction) << ','
        << csv::real(s.violation_fraction) << ',' << csv::real(s.inflight_projected_rate);
    for (double v : s.accept_rate) out << ',' << csv::real(v);
    for (double v : s.complete_rate) out << ',' << csv::real(v);
    out << "\n";
}

/// Runs every replication of `cfg`, writes per-run sample files, runs.csv and
/// aggregate.csv into `dir`, and returns the aggregate.
inline ExperimentSummary run_experiment(const ExperimentConfig& cfg,
                                        const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string());

    const auto results = run_replications(cfg);
    const std::size_t m = cfg.num_classes();
    {
        auto out = csv::open_out(dir / "config.conf");
        out << serialize_config(cfg);
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "samples_%03zu.csv", i);
        write_samples_csv(dir / name, results[i], m);
    }
    write_runs_csv(dir / "runs.csv", results, m);
    const ExperimentSummary summary = summarize(cfg, results);
    write_aggregate_csv(dir / "aggregate.csv", summary);
    return summary;
}

inline std::string point_dir_name(AdmissionPolicyKind policy, const std::string& column,
                                  double value) {
    return std::string(admission_name(policy)) + "_" + column + "_" + csv::value(value);
}

/// Runs the full (policy x value) grid and writes sweep.csv plus a complete
/// experiment directory per point. Rows are ordered by (policy name, value).
inline std::vector<SweepRow> run_sweep(const ExperimentConfig& base, const SweepSpec& sweep,
                                       const std::filesystem::path& dir) {
    if (sweep.policies.empty()) throw std::invalid_argument("sweep needs at least one policy");
    if (sweep.values.empty()) throw std::invalid_argument("sweep needs at least one value");

    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string());
    const std::string column = sweep_column_name(sweep.parameter);

    std::vector<AdmissionPolicyKind> policies = sweep.policies;
    std::sort(policies.begin(), policies.end(), [](auto a, auto b) {
        return std::string(admission_name(a)) < std::string(admission_name(b));
    });
    std::vector<double> values = sweep.values;
    std::sort(values.begin(), values.end());

    std::vector<SweepRow> rows;
    for (const auto policy : policies) {
        for (const double value : values) {
            ExperimentConfig cfg = base;
            cfg.policy.admission = policy;
            apply_parameter(cfg, sweep.parameter, value);
            const auto summary =
                run_experiment(cfg, dir / "points" / point_dir_name(policy, column, value));
            SweepRow row;
            row.policy = policy;
            row.value = value;
            row.rho_total = cfg.total_offered_load();
            row.revenue_mean = summary.revenue_rate.mean;
            row.ci_low = summary.revenue_rate.low();
            row.ci_high = summary.revenue_rate.high();
            row.reject_frac = summary.rejection_fraction;
            row.violation_frac = summary.violation_fraction;
            row.accept_rate = summary.accept_rate;
            rows.push_back(std::move(row));
        }
    }

    auto out = csv::open_out(dir / "sweep.csv");
    out << "# slasim sweep v1\n";
    out << "policy," << column << ",rho_total,revenue_mean,ci_low,ci_high,reject_frac,violation_frac";
    for (std::size_t c = 0; c < base.num_classes(); ++c) out << ",accept_rate_" << (c + 1);
    out << "\n";
    for (const SweepRow& r : rows) {
        out << admission_name(r.policy) << ',' << csv::value(r.value) << ','
            << csv::real(r.rho_total) << ',' << csv::real(r.revenue_mean) << ','
            << csv::real(r.ci_low) << ',' << csv::real(r.ci_high) << ','
            << csv::real(r.reject_frac) << ',' << csv::real(r.violation_frac);
        for (double v : r.accept_rate) out << ',' << csv::real(v);
        out << "\n";
    }
    return rows;
}

// --- plot data -------------------------------------------------------------------

/// Writes gnuplot-style x/y/err blocks (one block per policy) from a sweep
/// CSV. `kind` selects the y column: "revenue" or "sla_met".
inline void emit_plot_data(const std::filesystem::path& sweep_csv,
                           const std::filesystem::path& out_file,
                           const std::string& kind = "revenue") {
    const auto rows = csv::read(sweep_csv);
    if (rows.empty()) throw MissingColumns("empty sweep csv " + sweep_csv.string());
    const auto& header = rows.front();
    const std::size_t col_policy = csv::column(header, "policy");
    const std::size_t col_value = 1;  // the swept parameter is always column 1
    const std::size_t col_rev = csv::column(header, "revenue_mean");
    const std::size_t col_lo = csv::column(header, "ci_low");
    const std::size_t col_hi = csv::column(header, "ci_high");
    const std::size_t col_viol = csv::column(header, "violation_frac");

    std::map<std::string, std::vector<std::string>> blocks;
    std::vector<std::string> policy_order;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::string& policy = r[col_policy];
        if (!blocks.count(policy)) policy_order.push_back(policy);
        std::ostringstream line;
        if (kind == "sla_met") {
            line << r[col_value] << ' ' << csv::real(1.0 - std::stod(r[col_viol])) << " 0";
        } else {
            const double lo = std::stod(r[col_lo]);
            const double hi = std::stod(r[col_hi]);
            line << r[col_value] << ' ' << r[col_rev] << ' ' << csv::real((hi - lo) / 2.0);
        }
        blocks[policy].push_back(line.str());
    }

    auto out = csv::open_out(out_file);
    out << "# " << out_file.filename().string() << ": " << header[col_value] << " vs "
        << (kind == "sla_met" ? "fraction of SLAs met" : "revenue per second") << "\n";
    for (const std::string& policy : policy_order) {
        out << "# policy=" << policy << "\n";
        for (const std::string& line : blocks[policy]) out << line << "\n";
        out << "\n";
    }
}

/// Empirical CDF blocks of per-session mean waits, one block per label.
inline void emit_delay_cdf(const std::vector<std::pair<std::string, DelayCdf>>& curves,
                           const std::filesystem::path& out_file) {
    auto out = csv::open_out(out_file);
    out << "# " << out_file.filename().string() << ": session mean wait CDF\n";
    for (const auto& [label, cdf] : curves) {
        out << "# policy=" << label << "\n";
        const auto& vals = cdf.values();
        const std::size_t step = std::max<std::size_t>(1, vals.size() / 512);
        for (std::size_t i = 0; i < vals.size(); i += step) {
            out << csv::real(vals[i]) << ' '
                << csv::real(static_cast<double>(i + 1) / static_cast<double>(vals.size()))
                << "\n";
        }
        out << csv::real(vals.back()) << " 1.000000\n\n";
    }
}

// --- verification -----------------------------------------------------------------

namespace detail {

inline bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

/// Re-derives aggregate.csv from runs.csv + samples_*.csv in one experiment
/// directory; returns human-readable mismatches.
inline void verify_experiment_dir(const std::filesystem::path& dir,
                                  std::vector<std::string>& problems) {
    const auto agg_rows = csv::read(dir / "aggregate.csv");
    if (agg_rows.size() < 2) {
        problems.push_back(dir.string() + ": aggregate.csv has no data row");
        return;
    }
    const auto& header = agg_rows[0];
    const auto& agg = agg_rows[1];
    const auto get = [&](const std::string& name) {
        return std::stod(agg[csv::column(header, name)]);
    };

    // Pool revenue-rate samples across replications.
    std::vector<double> rates;
    const int runs = static_cast<int>(get("runs"));
    for (int i = 0;; ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "samples_%03d.csv", i);
        const auto path = dir / name;
        if (!std::filesystem::exists(path)) break;
        const auto rows = csv::read(path);
        if (rows.empty()) continue;
        const std::size_t col = csv::column(rows[0], "revenue_rate");
        for (std::size_t r = 1; r < rows.size(); ++r) rates.push_back(std::stod(rows[r][col]));
    }

    const auto runs_rows = csv::read(dir / "runs.csv");
    if (static_cast<int>(runs_rows.size()) - 1 != runs)
        problems.push_back(dir.string() + ": runs.csv row count disagrees with aggregate");

    std::int64_t accepted = 0, rejected = 0, completed = 0, violated = 0;
    {
        const auto& h = runs_rows[0];
        const std::size_t ca = csv::column(h, "accepted");
        const std::size_t cr = csv::column(h, "rejected");
        const std::size_t cc = csv::column(h, "completed");
        const std::size_t cv = csv::column(h, "violated");
        for (std::size_t r = 1; r < runs_rows.size(); ++r) {
            accepted += std::stoll(runs_rows[r][ca]);
            rejected += std::stoll(runs_rows[r][cr]);
            completed += std::stoll(runs_rows[r][cc]);
            violated += std::stoll(runs_rows[r][cv]);
        }
    }

    if (static_cast<std::int64_t>(rates.size()) != static_cast<std::int64_t>(get("samples")))
        problems.push_back(dir.string() + ": pooled sample count disagrees with aggregate");
    if (rates.size() >= 2) {
        const auto ci = student_t_ci(rates);
        if (!close(ci.mean, get("revenue_mean"), 2e-5))
            problems.push_back(dir.string() + ": revenue_mean not reproducible from samples");
        if (!close(ci.half_width, get("ci_half"), 2e-5))
            problems.push_back(dir.string() + ": ci_half not reproducible from samples");
    }
    const double rej = accepted + rejected > 0
                           ? static_cast<double>(rejected) / static_cast<double>(accepted + rejected)
                           : 0.0;
    if (!close(rej, get("reject_frac"), 1e-6))
        problems.push_back(dir.string() + ": reject_frac not reproducible from runs.csv");
    const double viol =
        completed > 0 ? static_cast<double>(violated) / static_cast<double>(completed) : 0.0;
    if (!close(viol, get("violation_frac"), 1e-6))
        problems.push_back(dir.string() + ": violation_frac not reproducible from runs.csv");
}

}  // namespace detail

/// Recomputes every aggregate found under `dir` (an experiment directory, or
/// a sweep directory with points/) from the per-run files. Returns the list
/// of mismatches; empty means everything checks out.
inline std::vector<std::string> verify_directory(const std::filesystem::path& dir) {
    std::vector<std::string> problems;
    if (std::filesystem::exists(dir / "aggregate.csv")) {
        detail::verify_experiment_dir(dir, problems);
        return problems;
    }
    if (std::filesystem::exists(dir / "points")) {
        std::vector<std::filesystem::path> points;
        for (const auto& entry : std::filesystem::directory_iterator(dir / "points"))
            if (entry.is_directory()) points.push_back(entry.path());
        std::sort(points.begin(), points.end());
        for (const auto& p : points) detail::verify_experiment_dir(p, problems);
        return problems;
    }
    throw IoError("nothing to verify under " + dir.string());
}

// --- preset pipeline ---------------------------------------------------------------

/// Materializes a preset: writes its config, runs the single experiment or
/// the figure sweep, and emits the plot-data files.
inline void run_preset(const Preset& preset, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string());
    {
        auto out = csv::open_out(dir / (preset.name + ".conf"));
        out << serialize_config(preset.config);
    }

    if (preset.policies.empty()) {
        run_experiment(preset.config, dir / "run");
        return;
    }

    SweepSpec sweep;
    sweep.parameter = "classes[4].delta";
    sweep.values = preset.delta4_values;
    sweep.policies = preset.policies;
    run_sweep(preset.config, sweep, dir);

    emit_plot_data(dir / "sweep.csv", dir / (preset.name + ".dat"), "revenue");
    if (preset.name == "fig6a")
        emit_plot_data(dir / "sweep.csv", dir / "fig6b.dat", "sla_met");

    if (preset.with_delay_cdf) {
        // Companion delay distribution at the heaviest load, class 4,
        // in-flight sessions included.
        std::vector<std::pair<std::string, DelayCdf>> curves;
        for (const auto policy : preset.policies) {
            ExperimentConfig cfg = preset.config;
            cfg.policy.admission = policy;
            apply_parameter(cfg, "classes[4].delta", preset.delta4_values.back());
            cfg.run.replications = 1;
            const RunResult r = run_simulation(cfg, cfg.run.seed);
            curves.emplace_back(admission_name(policy), delay_cdf(r.sessions, 3, true));
        }
        emit_delay_cdf(curves, dir / "fig8b.dat");
    }
}

}  // namespace slasim
