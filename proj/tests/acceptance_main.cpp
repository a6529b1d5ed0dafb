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

// End-to-end acceptance suite: one pass/fail line per criterion, nonzero
// exit if anything fails. Heavier sweeps are shared between criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "slasim/slasim.hpp"

using namespace slasim;

namespace {

struct Outcome {
    int id;
    std::string name;
    bool pass;
    std::string detail;
    double seconds;
};

std::vector<Outcome> outcomes;
bool all_pass = true;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
    outcomes.push_back({id, name, pass, detail, seconds});
    all_pass = all_pass && pass;
    std::printf("[%s] criterion %2d: %-28s %s (%.1f s)\n", pass ? "PASS" : "FAIL", id,
                name.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list args;
    va_start(args, f);
    std::vsnprintf(buf, sizeof buf, f, args);
    va_end(args);
    return buf;
}

// ---------------------------------------------------------------------------
// Shared sweep machinery (in-memory, matched seeds across policies).

struct Point {
    double value = 0.0;
    ExperimentSummary summary;
};
using Curve = std::vector<Point>;

Curve sweep_curve(const ExperimentConfig& base, AdmissionPolicyKind policy,
                  const std::vector<double>& values) {
    Curve curve;
    for (const double v : values) {
        ExperimentConfig cfg = base;
        cfg.policy.admission = policy;
        apply_parameter(cfg, "classes[4].delta", v);
        curve.push_back({v, summarize(cfg, run_replications(cfg))});
    }
    return curve;
}

double curve_mean_sum(const Curve& c) {
    double s = 0.0;
    for (const auto& p : c) s += p.summary.revenue_rate.mean;
    return s;
}

double curve_peak(const Curve& c) {
    double best = c.front().summary.revenue_rate.mean;
    for (const auto& p : c) best = std::max(best, p.summary.revenue_rate.mean);
    return best;
}

/// Monotonicity with at most `allowed` inversions, each forgivable only when
/// the two confidence intervals overlap.
bool monotone(const Curve& c, bool nondecreasing, int allowed, std::string* why) {
    int forgiven = 0;
    for (std::size_t i = 1; i < c.size(); ++i) {
        const auto& a = c[i - 1].summary.revenue_rate;
        const auto& b = c[i].summary.revenue_rate;
        const bool bad = nondecreasing ? b.mean < a.mean : b.mean > a.mean;
        if (!bad) continue;
        const bool overlap = b.high() >= a.low() && a.high() >= b.low();
        if (!overlap || ++forgiven > allowed) {
            *why = fmt("inversion at delta4=%.2f (%.3f -> %.3f)%s", c[i].value, a.mean, b.mean,
                       overlap ? " beyond allowance" : " without CI overlap");
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------

void criterion1_queueing_oracle() {
    Timer t;
    struct Config {
        double lambda, mu;
        int n;
    };
    const Config configs[] = {{0.5, 1.0, 1}, {1.5, 1.0, 2}, {4.0, 1.0, 5}};
    bool pass = true;
    std::string detail = "M/M/n sim vs formulas:";
    for (const auto& c : configs) {
        const double q = 1.0 / c.mu;
        const auto sim = oracles::simulate_mmn(c.lambda, c.mu, c.n, q, 2'000'000, 200'000, 42);
        const double wait = mmn_expected_wait(c.lambda, c.mu, c.n);
        const double tail = mmn_wait_tail(c.lambda, c.mu, c.n, q);
        const double rel = std::abs(sim.mean_wait - wait) / wait;
        const double abs_tail = std::abs(sim.tail_at_q - tail);
        pass = pass && rel <= 0.03 && abs_tail <= 0.01;
        detail += fmt(" (n=%d: %.1f%%, %.4f)", c.n, 100.0 * rel, abs_tail);
    }
    pass = pass && t.seconds() < 30.0;
    report(1, "queueing oracle", pass, detail, t.seconds());
}

void criterion2_bursty_generator() {
    Timer t;
    RandomStream rng = RandomStream::keyed(20260811, 3, 1);
    const std::int64_t n = 1'000'000;
    double sum = 0.0, sumsq = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double x = draw_interarrival(ArrivalProcess::Bursty, 1.0, rng);
        sum += x;
        sumsq += x * x;
    }
    const double mean = sum / static_cast<double>(n);
    const double scv = (sumsq / static_cast<double>(n) - mean * mean) / (mean * mean);
    const bool pass =
        std::abs(mean - 1.0) <= 0.01 && std::abs(scv - 6.12) <= 0.2 && t.seconds() < 5.0;
    report(2, "bursty generator", pass, fmt("mean=%.4f scv=%.3f", mean, scv), t.seconds());
}

void criterion3_table_identity() {
    Timer t;
    ExperimentConfig cfg = table1_config(0.1);
    cfg.run.duration = 7200.0;
    const RunResult r = run_simulation(cfg, 1);
    bool pass = true;
    std::string detail = "lambda vs k*delta:";
    for (std::size_t c = 0; c < 4; ++c) {
        const double expected = 50.0 * cfg.classes[c].traffic.delta;
        const double measured = static_cast<double>(r.jobs_emitted[c]) / cfg.run.duration;
        const double rel = std::abs(measured - expected) / expected;
        pass = pass && rel <= 0.05;
        detail += fmt(" %.1f%%", 100.0 * rel);
    }
    report(3, "table rate identity", pass, detail, t.seconds());
}

void criterion4_fig6a(std::map<std::string, Curve>& shared) {
    Timer t;
    const Preset preset = *get_preset("fig6a");
    shared["fig6a/admit_all"] =
        sweep_curve(preset.config, AdmissionPolicyKind::AdmitAll, preset.delta4_values);
    shared["fig6a/threshold"] =
        sweep_curve(preset.config, AdmissionPolicyKind::Threshold, preset.delta4_values);
    shared["fig6a/current_state"] =
        sweep_curve(preset.config, AdmissionPolicyKind::CurrentState, preset.delta4_values);

    const Curve& admit = shared["fig6a/admit_all"];
    Curve admit_tail;  // delta4 >= 0.1
    for (const auto& p : admit)
        if (p.value >= 0.1 - 1e-12) admit_tail.push_back(p);

    std::string why;
    bool pass = true;
    std::string detail;
    if (!monotone(admit_tail, /*nondecreasing=*/false, 1, &why)) {
        pass = false;
        detail += "admit_all " + why + "; ";
    }
    const double peak = curve_peak(admit);
    const double at_max = admit.back().summary.revenue_rate.mean;
    if (!(at_max <= 0.10 * peak)) {
        pass = false;
        detail += fmt("admit_all at 0.2 is %.3f > 10%% of peak %.3f; ", at_max, peak);
    }
    for (const char* name : {"fig6a/threshold", "fig6a/current_state"}) {
        if (!monotone(shared[name], /*nondecreasing=*/true, 1, &why)) {
            pass = false;
            detail += std::string(name) + " " + why + "; ";
        }
    }
    pass = pass && t.seconds() < 120.0;
    if (detail.empty())
        detail = fmt("admit-all peak %.2f -> %.2f at 0.2; heuristics rise", peak, at_max);
    report(4, "flat c=r revenue trends", pass, detail, t.seconds());
}

void criterion5_fig6c() {
    Timer t;
    const Preset preset = *get_preset("fig6c");
    const auto admit =
        sweep_curve(preset.config, AdmissionPolicyKind::AdmitAll, preset.delta4_values);
    const auto threshold =
        sweep_curve(preset.config, AdmissionPolicyKind::Threshold, preset.delta4_values);
    const auto current =
        sweep_curve(preset.config, AdmissionPolicyKind::CurrentState, preset.delta4_values);

    bool pass = true;
    std::string detail;
    for (const auto& p : admit) {
        if (p.value >= 0.12 - 1e-12 && !(p.summary.revenue_rate.mean < 0.0)) {
            pass = false;
            detail += fmt("admit_all %.3f at delta4=%.2f not negative; ",
                          p.summary.revenue_rate.mean, p.value);
        }
    }
    for (const Curve* c : {&threshold, &current}) {
        for (const auto& p : *c) {
            if (!(p.summary.revenue_rate.mean > 0.0)) {
                pass = false;
                detail += fmt("heuristic %.3f at delta4=%.2f not positive; ",
                              p.summary.revenue_rate.mean, p.value);
            }
        }
    }
    if (detail.empty())
        detail = fmt("admit-all negative from 0.12 (%.2f at 0.2), heuristics positive",
                     admit.back().summary.revenue_rate.mean);
    report(5, "punitive flat penalties", pass, detail, t.seconds());
}

void criterion6_fig8_rejections() {
    Timer t;
    const Preset preset = *get_preset("fig8a");
    ExperimentConfig cfg = preset.config;
    apply_parameter(cfg, "classes[4].delta", 0.2);

    cfg.policy.admission = AdmissionPolicyKind::Threshold;
    const auto thr = summarize(cfg, run_replications(cfg));
    cfg.policy.admission = AdmissionPolicyKind::CurrentState;
    const auto cur = summarize(cfg, run_replications(cfg));

    const double thr_rej = thr.rejection_fraction;
    const double cur_rej = cur.rejection_fraction;
    const bool pass = thr_rej - cur_rej >= 0.05 && thr_rej >= 0.20 && thr_rej <= 0.70 &&
                      cur_rej >= 0.20 && cur_rej <= 0.70;
    report(6, "rejection ordering", pass,
           fmt("threshold rejects %.1f%%, current-state %.1f%%", 100.0 * thr_rej,
               100.0 * cur_rej),
           t.seconds());
}

void criterion7_fig7b(std::map<std::string, Curve>& shared) {
    Timer t;
    const Preset swap_preset = *get_preset("fig7b");
    const Preset stationary = *get_preset("fig6a");  // same rewards, no swap

    const auto thr_swap =
        sweep_curve(swap_preset.config, AdmissionPolicyKind::Threshold, swap_preset.delta4_values);
    const auto cur_swap = sweep_curve(swap_preset.config, AdmissionPolicyKind::CurrentState,
                                      swap_preset.delta4_values);
    const auto ora_swap = sweep_curve(swap_preset.config, AdmissionPolicyKind::OracleThreshold,
                                      swap_preset.delta4_values);
    const Curve& thr_stat = shared["fig6a/threshold"];
    const Curve& cur_stat = shared["fig6a/current_state"];

    bool pass = true;
    std::string detail;

    const double cur_ratio = curve_mean_sum(cur_swap) / curve_mean_sum(cur_stat);
    if (!(cur_ratio >= 0.85 && cur_ratio <= 1.15)) {
        pass = false;
        detail += fmt("current-state swap/stationary %.3f outside [0.85,1.15]; ", cur_ratio);
    }
    const double thr_ratio = curve_mean_sum(thr_swap) / curve_mean_sum(thr_stat);
    if (!(thr_ratio >= 0.50 && thr_ratio <= 0.95)) {
        pass = false;
        detail += fmt("threshold swap/stationary %.3f outside [0.50,0.95]; ", thr_ratio);
    }
    for (std::size_t i = 0; i < ora_swap.size(); ++i) {
        if (ora_swap[i].summary.revenue_rate.mean <
            thr_swap[i].summary.revenue_rate.mean - 1e-9) {
            pass = false;
            detail += fmt("oracle %.3f < threshold %.3f at delta4=%.2f; ",
                          ora_swap[i].summary.revenue_rate.mean,
                          thr_swap[i].summary.revenue_rate.mean, ora_swap[i].value);
        }
    }
    if (detail.empty())
        detail = fmt("current-state ratio %.3f, threshold ratio %.3f, oracle dominates",
                     cur_ratio, thr_ratio);
    report(7, "non-stationary swaps", pass, detail, t.seconds());
}

void criterion8_threshold_search_oracle() {
    Timer t;
    bool pass = true;
    std::string detail;
    int checked = 0;
    for (const Preset& preset : list_presets()) {
        for (const double delta4 : {0.02, 0.10, 0.20}) {
            ExperimentConfig cfg = preset.config;
            apply_parameter(cfg, "classes[4].delta", delta4);

            std::vector<TrafficEstimate> est;
            std::vector<double> alphas;
            for (std::size_t c = 0; c < cfg.classes.size(); ++c) {
                const auto& cc = cfg.classes[c];
                est.push_back(TrafficEstimate{
                    static_cast<int>(c),
                    static_cast<double>(cc.service.jobs_per_session) * cc.traffic.delta,
                    cc.service.mean_service_time, arrival_squared_cv(cc.traffic.job_arrivals),
                    1.0, cc.traffic.delta});
                alphas.push_back(cc.service.importance);
            }
            const auto alloc = offered_loads_allocation(est, alphas, cfg.cluster.servers);

            for (std::size_t c = 0; c < cfg.classes.size(); ++c) {
                if (alloc[c] < 1) continue;
                const auto& cls = cfg.classes[c].service;
                const double epsilon = cfg.policy.epsilon;
                const std::int64_t cap = default_threshold_cap(cls, est[c]);
                ++checked;

                std::vector<double> curve(static_cast<std::size_t>(cap) + 1);
                std::int64_t best_m = 0;
                for (std::int64_t m = 0; m <= cap; ++m) {
                    curve[static_cast<std::size_t>(m)] =
                        estimate_threshold_revenue(cls, est[c], alloc[c], m);
                    if (curve[static_cast<std::size_t>(m)] >
                        curve[static_cast<std::size_t>(best_m)])
                        best_m = m;
                }

                const auto found = threshold_search(cls, est[c], alloc[c], epsilon, cap);
                if (found.is_unbounded()) {
                    if (!(curve[static_cast<std::size_t>(cap)] >=
                          curve[static_cast<std::size_t>(best_m)] - epsilon - 1e-9)) {
                        pass = false;
                        detail += fmt("%s d4=%.2f class %zu: unbounded but argmax %lld wins; ",
                                      preset.name.c_str(), delta4, c + 1,
                                      static_cast<long long>(best_m));
                    }
                } else if (found.value() != best_m) {
                    pass = false;
                    detail += fmt("%s d4=%.2f class %zu: search %lld vs argmax %lld; ",
                                  preset.name.c_str(), delta4, c + 1,
                                  static_cast<long long>(found.value()),
                                  static_cast<long long>(best_m));
                }

                // Unimodality beyond epsilon noise: significant first
                // differences must never turn positive after turning negative.
                bool seen_down = false;
                for (std::int64_t m = 0; m < cap; ++m) {
                    const double d = curve[static_cast<std::size_t>(m + 1)] -
                                     curve[static_cast<std::size_t>(m)];
                    if (d < -epsilon) seen_down = true;
                    if (d > epsilon && seen_down) {
                        pass = false;
                        detail += fmt("%s d4=%.2f class %zu not unimodal at M=%lld; ",
                                      preset.name.c_str(), delta4, c + 1,
                                      static_cast<long long>(m));
                        break;
                    }
                }
            }
        }
    }
    if (detail.empty()) detail = fmt("%d class/allocation pairs, search = argmax, unimodal", checked);
    report(8, "threshold search oracle", pass, detail, t.seconds());
}

void criterion9_invariants() {
    Timer t;
    bool pass = true;
    std::string detail;
    int runs = 0;
    for (const Preset& preset : list_presets()) {
        std::vector<AdmissionPolicyKind> policies = preset.policies;
        if (policies.empty()) policies = {preset.config.policy.admission};
        for (const auto policy : policies) {
            for (const double delta4 : {0.02, 0.20}) {
                ExperimentConfig cfg = preset.config;
                cfg.policy.admission = policy;
                cfg.run.replications = 1;
                cfg.check_invariants = true;
                apply_parameter(cfg, "classes[4].delta", delta4);
                try {
                    const RunResult r = run_simulation(cfg, 1234);
                    ++runs;
                    // Session integrity and revenue conservation.
                    for (const SessionRecord& s : r.sessions) {
                        const auto k =
                            cfg.classes[static_cast<std::size_t>(s.class_index)].service.jobs_per_session;
                        if (s.state == SessionState::Completed && s.jobs_completed != k)
                            throw SimulationInvariantViolation("session finished short of k");
                        if (s.state == SessionState::Rejected && s.jobs_completed != 0)
                            throw SimulationInvariantViolation("rejected session ran jobs");
                    }
                    double sampled = 0.0;
                    for (const auto& smp : r.samples) sampled += smp.revenue;
                    if (std::abs(sampled - r.revenue) > 1e-6)
                        throw SimulationInvariantViolation("sample revenue != booked revenue");
                } catch (const std::exception& e) {
                    pass = false;
                    detail += fmt("%s/%s d4=%.2f: %s; ", preset.name.c_str(),
                                  admission_name(policy), delta4, e.what());
                }
            }
        }
    }
    // Determinism: identical seeds give identical sample series.
    {
        ExperimentConfig cfg = table1_config(0.14);
        cfg.policy.admission = AdmissionPolicyKind::Threshold;
        const RunResult a = run_simulation(cfg, 77);
        const RunResult b = run_simulation(cfg, 77);
        bool same = a.samples.size() == b.samples.size() && a.revenue == b.revenue;
        for (std::size_t i = 0; same && i < a.samples.size(); ++i)
            same = a.samples[i].revenue == b.samples[i].revenue &&
                   a.samples[i].accepted == b.samples[i].accepted;
        if (!same) {
            pass = false;
            detail += "repeat run diverged; ";
        }
    }
    if (detail.empty()) detail = fmt("%d preset runs clean, repeat run identical", runs);
    report(9, "invariant suite", pass, detail, t.seconds());
}

void criterion10_fig9_bounds() {
    Timer t;
    const double epsilon = 0.05;  // share of the peak tolerated below zero
    const Preset fig9a = *get_preset("fig9a");
    const auto admit_a =
        sweep_curve(fig9a.config, AdmissionPolicyKind::AdmitAll, fig9a.delta4_values);
    const double peak_a = curve_peak(admit_a);
    const Point& heavy_a = admit_a.back();
    const double mean_a = heavy_a.summary.revenue_rate.mean;

    // Worst case per completed session is c - r'' ; the revenue rate can
    // never drop below minus the accepted-session rates priced at the caps.
    double cap_bound = 0.0;
    for (std::size_t c = 0; c < 4; ++c) {
        const auto& reward =
            std::get<BoundedProportionalReward>(fig9a.config.classes[c].service.reward);
        cap_bound += heavy_a.summary.accept_rate[c] * reward.capped_penalty;
    }

    bool pass = true;
    std::string detail;
    if (!(mean_a >= -epsilon * std::abs(peak_a))) {
        pass = false;
        detail += fmt("fig9a admit-all %.3f below -%.2f*|peak %.3f|; ", mean_a, epsilon, peak_a);
    }
    if (!(mean_a >= -cap_bound)) {
        pass = false;
        detail += fmt("fig9a admit-all %.3f below cap bound -%.3f; ", mean_a, cap_bound);
    }

    const Preset fig9b = *get_preset("fig9b");
    ExperimentConfig cfg_b = fig9b.config;
    cfg_b.policy.admission = AdmissionPolicyKind::AdmitAll;
    apply_parameter(cfg_b, "classes[4].delta", 0.2);
    const auto heavy_b = summarize(cfg_b, run_replications(cfg_b));
    if (!(heavy_b.revenue_rate.mean < 0.0)) {
        pass = false;
        detail += fmt("fig9b admit-all %.3f not negative; ", heavy_b.revenue_rate.mean);
    }
    if (detail.empty())
        detail = fmt("t=2q no losses (%.3f >= -%.3f), t=5q negative (%.3f)", mean_a,
                     epsilon * std::abs(peak_a), heavy_b.revenue_rate.mean);
    report(10, "bounded penalty signs", pass, detail, t.seconds());
}

}  // namespace

int main() {
    Timer total;
    std::map<std::string, Curve> shared;

    criterion1_queueing_oracle();
    criterion2_bursty_generator();
    criterion3_table_identity();
    criterion4_fig6a(shared);
    criterion5_fig6c();
    criterion6_fig8_rejections();
    criterion7_fig7b(shared);
    criterion8_threshold_search_oracle();
    criterion9_invariants();
    criterion10_fig9_bounds();

    int passed = 0;
    for (const auto& o : outcomes) passed += o.pass ? 1 : 0;
    std::printf("%d/%zu criteria passed in %.1f s\n", passed, outcomes.size(), total.seconds());
    return all_pass ? 0 : 1;
}
