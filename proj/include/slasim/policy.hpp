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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <vector>

#include "slasim/model.hpp"
#include "slasim/queueing.hpp"

namespace slasim {

/// Servers committed to each class pool. Always sums to the cluster size.
struct AllocationVector {
    std::vector<int> servers;

    int total() const { return std::accumulate(servers.begin(), servers.end(), 0); }
    int operator[](std::size_t i) const { return servers[i]; }
};

/// Per-class cap on concurrently active sessions. Unbounded means admit
/// regardless of how many are active.
class Threshold {
public:
    static Threshold unbounded() { return Threshold{std::nullopt}; }
    static Threshold at(std::int64_t m) { return Threshold{m}; }

    bool is_unbounded() const { return !cap_.has_value(); }
    std::int64_t value() const { return *cap_; }

    bool operator==(const Threshold&) const = default;

private:
    explicit Threshold(std::optional<std::int64_t> cap) : cap_(cap) {}
    std::optional<std::int64_t> cap_;
};

struct ThresholdVector {
    std::vector<Threshold> caps;
    double epsilon = 0.01;  // search stopping tolerance, money per second
};

/// Accept an arriving session only while fewer than M sessions are active.
inline bool threshold_decide(std::int64_t active_count, const Threshold& threshold) {
    return threshold.is_unbounded() || active_count < threshold.value();
}

/// Read-only snapshot of one class pool at a decision instant.
struct ClassStateView {
    std::vector<SessionRecord> active_sessions;
    std::int64_t queue_length = 0;
    int servers = 0;  // committed allocation n_i
};

struct QueueStateView {
    std::vector<ClassStateView> classes;
};

/// Splits `total` servers in proportion to alpha-weighted offered loads
/// (largest-remainder rounding, ties to the lower index), then guarantees a
/// server to every loaded class while some class can spare one.
inline AllocationVector offered_loads_allocation(const std::vector<TrafficEstimate>& estimates,
                                                 const std::vector<double>& alphas, int total) {
    const std::size_t m = estimates.size();
    std::vector<int> servers(m, 0);
    std::vector<double> weights(m, 0.0);
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        weights[i] = alphas[i] * estimates[i].lambda_hat * estimates[i].b_hat;
        weight_sum += weights[i];
    }

    if (weight_sum <= 0.0) {
        const int base = total / static_cast<int>(m);
        const int extra = total % static_cast<int>(m);
        for (std::size_t i = 0; i < m; ++i)
            servers[i] = base + (static_cast<int>(i) < extra ? 1 : 0);
        return AllocationVector{std::move(servers)};
    }

    std::vector<double> remainders(m, 0.0);
    int assigned = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double quota = static_cast<double>(total) * weights[i] / weight_sum;
        servers[i] = static_cast<int>(std::floor(quota));
        remainders[i] = quota - static_cast<double>(servers[i]);
        assigned += servers[i];
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return remainders[a] > remainders[b];
    });
    for (int left = total - assigned, pos = 0; left > 0; --left, ++pos)
        ++servers[order[static_cast<std::size_t>(pos) % m]];

    // No loaded class may be starved outright while another has servers to spare.
    for (std::size_t i = 0; i < m; ++i) {
        if (weights[i] <= 0.0 || servers[i] != 0) continue;
        std::size_t donor = m;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            if (donor == m || servers[j] > servers[donor]) donor = j;
        }
        if (donor < m && servers[donor] >= 2) {
            --servers[donor];
            servers[i] = 1;
        }
    }
    return AllocationVector{std::move(servers)};
}

namespace detail {

inline double effective_service_time(const ServiceClass& cls, const TrafficEstimate& est) {
    return est.b_hat > 0.0 ? est.b_hat : cls.mean_service_time;
}

}  // namespace detail

/// Expected revenue per unit time of one class served by n dedicated servers
/// when sessions are admitted below threshold M. The session-level system is
/// an Erlang loss model offered delta_hat * k / gamma erlangs; job delay at
/// each active-session count j comes from the G/G/n estimate at rate j*gamma.
/// Flat rewards use the state-weighted per-job wait tail as the violation
/// probability; the other models price the state-weighted mean wait.
inline double estimate_threshold_revenue(const ServiceClass& cls, const TrafficEstimate& est,
                                         int n, std::int64_t threshold) {
    if (threshold <= 0 || est.delta_hat <= 0.0) return 0.0;

    const double offered = est.delta_hat * session_duration(cls);
    const LossDistribution pi = erlang_loss_distribution(offered, threshold);
    const double accepted_rate = est.delta_hat * (1.0 - pi.blocking());
    if (accepted_rate <= 0.0) return 0.0;

    double weight_sum = 0.0;
    for (std::int64_t j = 1; j <= threshold; ++j)
        weight_sum += static_cast<double>(j) * pi.probs[static_cast<std::size_t>(j)];
    if (weight_sum <= 0.0) return accepted_rate * charge_of(cls.reward);

    const double b = detail::effective_service_time(cls, est);
    const bool flat = std::holds_alternative<FlatReward>(cls.reward);

    double violation_prob = 0.0;  // flat model
    double mean_wait = 0.0;       // proportional models
    for (std::int64_t j = 1; j <= threshold; ++j) {
        const double u = static_cast<double>(j) * pi.probs[static_cast<std::size_t>(j)] / weight_sum;
        if (u <= 0.0) continue;
        const double lambda = static_cast<double>(j) * cls.job_rate;
        if (flat) {
            violation_prob += u * mmn_tail_or_one(lambda, 1.0 / b, n, cls.obligation);
        } else {
            mean_wait += u * ggn_wait_or_infinity(lambda, b, est.ca2_hat, est.cs2_hat, n);
        }
    }

    if (flat) {
        const auto& model = std::get<FlatReward>(cls.reward);
        return accepted_rate * (model.charge - model.penalty * violation_prob);
    }
    return accepted_rate * session_net_revenue(cls.reward, mean_wait, cls.obligation);
}

/// Walks M = 0, 1, 2, ... over an arbitrary revenue curve; stops at the first
/// decrease (returning the preceding M) or declares the threshold unbounded
/// once the increase drops below epsilon or the cap is reached.
inline Threshold threshold_search_over(const std::function<double(std::int64_t)>& revenue,
                                       double epsilon, std::int64_t cap) {
    double prev = revenue(0);
    for (std::int64_t m = 1; m <= cap; ++m) {
        const double cur = revenue(m);
        if (cur < prev) return Threshold::at(m - 1);
        if (cur - prev < epsilon) return Threshold::unbounded();
        prev = cur;
    }
    return Threshold::unbounded();
}

inline std::int64_t default_threshold_cap(const ServiceClass& cls, const TrafficEstimate& est) {
    const double offered = est.delta_hat * session_duration(cls);
    return static_cast<std::int64_t>(std::ceil(10.0 * offered)) + 50;
}

/// Revenue-maximizing admission threshold for one class at allocation n.
/// cap <= 0 selects the default guard of 10x the offered session load + 50.
inline Threshold threshold_search(const ServiceClass& cls, const TrafficEstimate& est, int n,
                                  double epsilon, std::int64_t cap = 0) {
    if (n < 1) return Threshold::at(0);
    if (cap <= 0) cap = default_threshold_cap(cls, est);
    return threshold_search_over(
        [&](std::int64_t m) { return estimate_threshold_revenue(cls, est, n, m); }, epsilon, cap);
}

/// Mean wait the session will have achieved at completion if its remaining
/// jobs each wait `future_wait` seconds.
inline double predict_session_final_wait(const SessionRecord& record, std::int64_t jobs_total,
                                         double future_wait) {
    const std::int64_t remaining = jobs_total - record.jobs_completed;
    if (remaining <= 0) return record.cumulative_wait / static_cast<double>(jobs_total);
    return (record.cumulative_wait + static_cast<double>(remaining) * future_wait) /
           static_cast<double>(jobs_total);
}

struct ServerMove {
    int from_class = 0;
    int to_class = 0;
};

struct AdmissionDecision {
    bool accept = false;
    std::optional<ServerMove> move;
};

/// Finite per-job wait predicted for a pool running at or beyond capacity:
/// the excess work accumulates as a fluid backlog over one session span, so
/// a job waits one service time plus its share of the average backlog. The
/// marginal congestion only lasts while the current sessions keep
/// submitting, which keeps this estimate (and the admission value function
/// below) finite at the capacity boundary instead of jumping to infinity.
inline double overload_session_wait(const ServiceClass& cls, double lambda, double b, int servers) {
    const double excess = lambda * b - static_cast<double>(servers);
    return b + excess * session_duration(cls) / (2.0 * static_cast<double>(servers));
}

namespace detail {

inline double predicted_pool_wait(const ServiceClass& cls, const TrafficEstimate& est,
                                  int servers, std::int64_t count) {
    const double lambda = static_cast<double>(count) * cls.job_rate;
    const double b = effective_service_time(cls, est);
    if (servers < 1) return kInfiniteWait;
    if (lambda * b < static_cast<double>(servers))
        return ggn_expected_wait(lambda, b, est.ca2_hat, est.cs2_hat, servers);
    return overload_session_wait(cls, lambda, b, servers);
}

/// Contribution of one class pool to the predicted-revenue function V:
/// per-active-session net revenue at the pool's predicted per-job wait,
/// with the incoming session counted when requested. -inf can appear only
/// under proportional rewards on a pool with no servers at all.
inline double class_predicted_value(const ServiceClass& cls, const TrafficEstimate& est,
                                    int servers, const std::vector<SessionRecord>& active,
                                    bool plus_incoming) {
    const std::int64_t count = static_cast<std::int64_t>(active.size()) + (plus_incoming ? 1 : 0);
    if (count == 0) return 0.0;
    const double lambda = static_cast<double>(count) * cls.job_rate;
    const double b = effective_service_time(cls, est);

    if (const auto* flat = std::get_if<FlatReward>(&cls.reward)) {
        double tail;
        if (servers >= 1 && lambda * b < static_cast<double>(servers)) {
            tail = mmn_wait_tail(lambda, 1.0 / b, servers, cls.obligation);
        } else if (servers >= 1) {
            tail = overload_session_wait(cls, lambda, b, servers) > cls.obligation ? 1.0 : 0.0;
        } else {
            tail = 1.0;
        }
        return static_cast<double>(count) * (flat->charge - flat->penalty * tail);
    }

    const double wait = predicted_pool_wait(cls, est, servers, count);
    double value = 0.0;
    for (const SessionRecord& s : active)
        value += session_net_revenue(cls.reward, predict_session_final_wait(s, cls.jobs_per_session, wait),
                                     cls.obligation);
    if (plus_incoming) value += session_net_revenue(cls.reward, wait, cls.obligation);
    return value;
}

/// Difference of predicted values with infinities resolved conservatively:
/// a candidate that leaves (or puts) a pool at -inf never wins, rescuing a
/// pool from -inf counts as +inf.
inline double value_delta(double candidate, double baseline) {
    const bool cand_inf = std::isinf(candidate) && candidate < 0.0;
    const bool base_inf = std::isinf(baseline) && baseline < 0.0;
    if (cand_inf) return -kInfiniteWait;
    if (base_inf) return kInfiniteWait;
    return candidate - baseline;
}

inline double combine_deltas(double a, double b) {
    if (std::isinf(a) && a < 0.0) return a;
    if (std::isinf(b) && b < 0.0) return b;
    return a + b;
}

}  // namespace detail

/// Per-arrival admission for the state-based policy: compares the predicted
/// revenue of admitting the incoming session (optionally together with a
/// single-server transfer from another pool) against leaving the system as
/// is. Ties reject; candidate order is no-move first, then donors by index.
inline AdmissionDecision current_state_decide(const QueueStateView& state, int incoming,
                                              const std::vector<TrafficEstimate>& estimates,
                                              const std::vector<ServiceClass>& classes) {
    const std::size_t m = classes.size();
    const std::size_t inc = static_cast<std::size_t>(incoming);

    const auto pool_value = [&](std::size_t c, int servers, bool plus_incoming) {
        return detail::class_predicted_value(classes[c], estimates[c], servers,
                                             state.classes[c].active_sessions, plus_incoming);
    };

    // Baseline values of the pools any candidate can touch.
    const double base_inc = pool_value(inc, state.classes[inc].servers, false);

    // Candidate (b): admit under the current allocation.
    double best_delta =
        detail::value_delta(pool_value(inc, state.classes[inc].servers, true), base_inc);
    std::optional<ServerMove> best_move;

    // Candidates (c): admit plus one server moved from a donor pool.
    for (std::size_t j = 0; j < m; ++j) {
        if (j == inc || state.classes[j].servers < 2) continue;
        const double delta_inc =
            detail::value_delta(pool_value(inc, state.classes[inc].servers + 1, true), base_inc);
        const double base_j = pool_value(j, state.classes[j].servers, false);
        const double delta_j =
            detail::value_delta(pool_value(j, state.classes[j].servers - 1, false), base_j);
        const double delta = detail::combine_deltas(delta_inc, delta_j);
        if (delta > best_delta) {
            best_delta = delta;
            best_move = ServerMove{static_cast<int>(j), incoming};
        }
    }

    if (best_delta > 0.0) return AdmissionDecision{true, best_move};
    return AdmissionDecision{false, std::nullopt};
}

enum class AdmissionPolicyKind { AdmitAll, Threshold, CurrentState, OracleThreshold };

inline bool is_threshold_policy(AdmissionPolicyKind kind) {
    return kind == AdmissionPolicyKind::Threshold || kind == AdmissionPolicyKind::OracleThreshold;
}

struct ReconfigureResult {
    AllocationVector allocation;
    ThresholdVector thresholds;
};

/// Configuration-epoch work: re-allocate servers from the fresh estimates,
/// then (threshold policies only) re-search the per-class admission caps
/// against the new allocation. A class left with no servers is capped at 0.
inline ReconfigureResult window_boundary_reconfigure(const std::vector<ServiceClass>& classes,
                                                     const std::vector<TrafficEstimate>& estimates,
                                                     int total_servers,
                                                     AdmissionPolicyKind admission, double epsilon,
                                                     std::int64_t threshold_cap = 0) {
    std::vector<double> alphas(classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) alphas[i] = classes[i].importance;

    ReconfigureResult out;
    out.allocation = offered_loads_allocation(estimates, alphas, total_servers);
    out.thresholds.epsilon = epsilon;
    out.thresholds.caps.reserve(classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) {
        if (is_threshold_policy(admission)) {
            out.thresholds.caps.push_back(threshold_search(
                classes[i], estimates[i], out.allocation[i], epsilon, threshold_cap));
        } else {
            out.thresholds.caps.push_back(Threshold::unbounded());
        }
    }
    return out;
}

}  // namespace slasim
