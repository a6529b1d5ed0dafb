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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>

namespace slasim {

/// Thrown when a domain object fails validation. Carries the offending field.
class InvalidParameter : public std::invalid_argument {
public:
    InvalidParameter(std::string field, const std::string& what)
        : std::invalid_argument(what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Fixed-charge contract: full refundable penalty `r` once the obligation is
/// missed, regardless of how large the excess delay is.
struct FlatReward {
    double charge = 0.0;   // c, paid per accepted session
    double penalty = 0.0;  // r, paid back on violation
};

/// Penalty grows linearly with the excess of the session mean wait over the
/// obligation.
struct ProportionalReward {
    double charge = 0.0;        // c
    double penalty_rate = 0.0;  // r, money per second of excess
};

/// Linear penalty up to a delay bound, then a fixed cap.
struct BoundedProportionalReward {
    double charge = 0.0;          // c
    double penalty_rate = 0.0;    // r', money per second on (q, t]
    double bound = 0.0;           // t, delay where the penalty caps out
    double capped_penalty = 0.0;  // r'', fixed penalty beyond t
};

using RewardModel = std::variant<FlatReward, ProportionalReward, BoundedProportionalReward>;

inline double charge_of(const RewardModel& model) {
    return std::visit([](const auto& m) { return m.charge; }, model);
}

/// Per-type service contract and traffic constants.
struct ServiceClass {
    int index = 0;                   // small id, unique within a configuration
    double mean_service_time = 0.0;  // b, seconds
    double job_rate = 0.0;           // gamma, within-session submissions per second
    std::int64_t jobs_per_session = 0;  // k
    double obligation = 0.0;         // q, ceiling on a session's mean job wait
    double importance = 1.0;         // alpha, economic weight for allocation
    RewardModel reward{FlatReward{}};
};

enum class SessionState { Active, Completed, Rejected };

/// Live state of one session, updated as its jobs complete.
struct SessionRecord {
    std::uint64_t session_id = 0;
    int class_index = 0;
    double arrival_time = 0.0;
    std::int64_t jobs_completed = 0;  // d
    double cumulative_wait = 0.0;     // sum of per-job waits, seconds
    SessionState state = SessionState::Active;

    /// Mean wait achieved so far; defined only when jobs_completed > 0.
    double mean_wait() const { return cumulative_wait / static_cast<double>(jobs_completed); }
};

struct Job {
    std::uint64_t session_id = 0;
    int class_index = 0;
    double arrival_time = 0.0;
    double service_demand = 0.0;  // seconds
    double wait = 0.0;            // arrival to start of service, set at dispatch
};

/// Checks every type invariant; returns the class unchanged when all hold.
inline ServiceClass validate_class(const ServiceClass& cls) {
    const auto fail = [&](const char* field, const std::string& msg) {
        throw InvalidParameter(field, "class " + std::to_string(cls.index + 1) + ": " + msg);
    };
    if (!(cls.mean_service_time > 0.0)) fail("b", "mean service time must be > 0");
    if (!(cls.job_rate > 0.0)) fail("gamma", "job submission rate must be > 0");
    if (cls.jobs_per_session < 1) fail("k", "jobs per session must be >= 1");
    if (!(cls.obligation >= 0.0)) fail("q", "waiting-time obligation must be >= 0");
    if (!(cls.importance > 0.0)) fail("alpha", "importance coefficient must be > 0");

    if (const auto* flat = std::get_if<FlatReward>(&cls.reward)) {
        if (!(flat->charge >= 0.0)) fail("c", "charge must be >= 0");
        if (!(flat->penalty >= 0.0)) fail("r", "penalty must be >= 0");
    } else if (const auto* prop = std::get_if<ProportionalReward>(&cls.reward)) {
        if (!(prop->charge >= 0.0)) fail("c", "charge must be >= 0");
        if (!(prop->penalty_rate >= 0.0)) fail("r", "penalty rate must be >= 0");
    } else if (const auto* bnd = std::get_if<BoundedProportionalReward>(&cls.reward)) {
        if (!(bnd->charge >= 0.0)) fail("c", "charge must be >= 0");
        if (!(bnd->penalty_rate >= 0.0)) fail("r_prime", "penalty rate must be >= 0");
        if (!(bnd->capped_penalty >= 0.0)) fail("r_dprime", "capped penalty must be >= 0");
        if (!(bnd->bound > cls.obligation))
            fail("t", "penalty bound must exceed the obligation q");
    }
    return cls;
}

/// Net money earned from one completed session whose jobs waited `mean_wait`
/// on average, under obligation `q`. Violation is strict: W > q. May be
/// negative. Total on every mean_wait >= 0, including +infinity.
inline double session_net_revenue(const RewardModel& model, double mean_wait, double q) {
    struct Eval {
        double w, q;
        double operator()(const FlatReward& m) const {
            return w > q ? m.charge - m.penalty : m.charge;
        }
        double operator()(const ProportionalReward& m) const {
            if (w <= q || m.penalty_rate == 0.0) return m.charge;
            return m.charge - m.penalty_rate * (w - q);
        }
        double operator()(const BoundedProportionalReward& m) const {
            if (w <= q) return m.charge;
            if (w > m.bound) return m.charge - m.capped_penalty;
            if (m.penalty_rate == 0.0) return m.charge;
            return m.charge - m.penalty_rate * (w - q);
        }
    };
    return std::visit(Eval{mean_wait, q}, model);
}

/// Nominal time for a session to submit all of its jobs.
inline double session_duration(const ServiceClass& cls) {
    return static_cast<double>(cls.jobs_per_session) / cls.job_rate;
}

}  // namespace slasim
