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
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "slasim/config.hpp"
#include "slasim/metrics.hpp"
#include "slasim/model.hpp"
#include "slasim/policy.hpp"
#include "slasim/queueing.hpp"
#include "slasim/rng.hpp"

namespace slasim {

enum class EventKind {
    SessionArrival,
    JobArrival,
    JobCompletion,
    WindowBoundary,
    LoadSwap,
    SampleTick,
    ServerMigrated,
};

inline const char* event_kind_name(EventKind k) {
    switch (k) {
        case EventKind::SessionArrival: return "session_arrival";
        case EventKind::JobArrival: return "job_arrival";
        case EventKind::JobCompletion: return "job_completion";
        case EventKind::WindowBoundary: return "window_boundary";
        case EventKind::LoadSwap: return "load_swap";
        case EventKind::SampleTick: return "sample_tick";
        case EventKind::ServerMigrated: return "server_migrated";
    }
    return "?";
}

struct TraceRecord {
    double time = 0.0;
    EventKind kind = EventKind::SessionArrival;
    int class_index = -1;          // -1 for system-wide events
    std::uint64_t session_id = 0;
    std::int64_t queue_length = 0;  // pool queue, or total for system events
    int busy_servers = 0;
};

using TraceSink = std::function<void(const TraceRecord&)>;

/// Raised when an always-on structural check fails (a simulator bug, never
/// a property of the modeled system).
class SimulationInvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Per-class counters gathered over one observation window.
struct ClassWindowStats {
    std::int64_t job_arrivals = 0;
    std::int64_t turned_away_jobs = 0;  // k jobs per rejected session: offered, not carried
    std::int64_t session_arrivals = 0;
    std::int64_t interarrival_count = 0;
    double interarrival_sum = 0.0;
    double interarrival_sumsq = 0.0;
    std::int64_t service_count = 0;
    double service_sum = 0.0;
    double service_sumsq = 0.0;

    void add_interarrival(double x) {
        ++interarrival_count;
        interarrival_sum += x;
        interarrival_sumsq += x * x;
    }
    void add_service(double x) {
        ++service_count;
        service_sum += x;
        service_sumsq += x * x;
    }
};

struct WindowStats {
    double start = 0.0;
    double end = 0.0;
    std::vector<ClassWindowStats> per_class;
};

/// One draw of a job inter-arrival interval for the given process.
inline double draw_interarrival(ArrivalProcess process, double gamma, RandomStream& rng) {
    if (process == ArrivalProcess::Exponential) return rng.exponential(1.0 / gamma);
    if (rng.bernoulli(kBurstyFastShare)) return rng.exponential(kBurstyFastFactor / gamma);
    return rng.exponential(kBurstySlowFactor / gamma);
}

/// Turns a closed window into fresh traffic estimates, EWMA-smoothed against
/// the previous ones: published = beta * raw + (1 - beta) * previous. Rates
/// are always measured (zero arrivals decay the estimate); shape statistics
/// (b, ca2, cs2) carry the previous value until enough samples exist. A
/// window with no observations at all is a no-op.
///
/// lambda_hat tracks the offered job rate: jobs that actually arrived plus
/// the jobs of sessions the admission policy turned away. Without the
/// second term a heavily rejected class measures near-zero load, loses its
/// servers, and can never attract them back.
inline std::vector<TrafficEstimate> profiler_close_window(
    const WindowStats& window, const std::vector<TrafficEstimate>& previous, double beta) {
    const double len = window.end - window.start;

    bool any = false;
    for (const auto& c : window.per_class)
        any = any || c.job_arrivals > 0 || c.session_arrivals > 0 || c.service_count > 0;
    if (!any || !(len > 0.0)) return previous;

    std::vector<TrafficEstimate> out = previous;
    for (std::size_t c = 0; c < window.per_class.size(); ++c) {
        const ClassWindowStats& w = window.per_class[c];
        TrafficEstimate& e = out[c];

        const auto blend = [beta](double raw, double prev) {
            return beta * raw + (1.0 - beta) * prev;
        };
        e.lambda_hat =
            blend(static_cast<double>(w.job_arrivals + w.turned_away_jobs) / len, e.lambda_hat);
        e.delta_hat = blend(static_cast<double>(w.session_arrivals) / len, e.delta_hat);
        if (w.service_count >= 1)
            e.b_hat = blend(w.service_sum / static_cast<double>(w.service_count), e.b_hat);

        const auto squared_cv = [](std::int64_t n, double sum, double sumsq) -> double {
            const double mean = sum / static_cast<double>(n);
            if (!(mean > 0.0)) return -1.0;
            const double var =
                std::max(0.0, (sumsq - sum * mean) / static_cast<double>(n - 1));
            return var / (mean * mean);
        };
        if (w.interarrival_count >= 2) {
            const double cv2 =
                squared_cv(w.interarrival_count, w.interarrival_sum, w.interarrival_sumsq);
            if (cv2 >= 0.0) e.ca2_hat = blend(cv2, e.ca2_hat);
        }
        if (w.service_count >= 2) {
            const double cv2 = squared_cv(w.service_count, w.service_sum, w.service_sumsq);
            if (cv2 >= 0.0) e.cs2_hat = blend(cv2, e.cs2_hat);
        }
    }
    return out;
}

struct RunResult {
    double duration = 0.0;
    std::uint64_t seed = 0;
    std::string rng_algorithm = kRngAlgorithm;

    std::vector<MetricsSample> samples;
    std::vector<SessionRecord> sessions;  // every arrived session, final state

    std::vector<std::int64_t> accepted;  // per class
    std::vector<std::int64_t> rejected;
    std::vector<std::int64_t> completed;
    std::vector<std::int64_t> violated;
    std::vector<std::int64_t> jobs_emitted;    // per class
    std::vector<std::int64_t> jobs_completed;  // per class
    std::vector<std::int64_t> jobs_in_service; // per class, at the horizon

    double revenue = 0.0;  // net, completed sessions only
    double inflight_projected_revenue = 0.0;  // plus active sessions at their partial means
    std::int64_t inflight_sessions = 0;

    std::vector<TrafficEstimate> final_estimates;
    std::vector<int> final_allocation;
    std::vector<std::int64_t> final_queue_lengths;

    double revenue_rate() const { return duration > 0.0 ? revenue / duration : 0.0; }
    double inflight_projected_rate() const {
        return duration > 0.0 ? inflight_projected_revenue / duration : 0.0;
    }
    std::int64_t total_accepted() const {
        std::int64_t s = 0;
        for (auto v : accepted) s += v;
        return s;
    }
    std::int64_t total_rejected() const {
        std::int64_t s = 0;
        for (auto v : rejected) s += v;
        return s;
    }
    std::int64_t total_completed() const {
        std::int64_t s = 0;
        for (auto v : completed) s += v;
        return s;
    }

    RateSummary rates() const {
        return rejection_and_violation_rates(accepted, rejected, completed, violated);
    }
};

/// Single-run discrete-event simulator. Strictly single-threaded; identical
/// (config, seed) pairs produce identical event sequences and results.
class Simulator {
public:
    Simulator(const ExperimentConfig& cfg, std::uint64_t seed)
        : cfg_(cfg),
          seed_(seed),
          num_classes_(cfg.classes.size()),
          total_servers_(cfg.cluster.servers) {
        for (const auto& c : cfg_.classes) {
            classes_.push_back(c.service);
            traffic_.push_back(c.traffic);
        }
    }

    void set_trace_sink(TraceSink sink) { trace_ = std::move(sink); }

    RunResult run() {
        initialize();
        const double horizon = cfg_.run.duration;
        while (!events_.empty() && events_.top().time <= horizon) {
            const Event ev = events_.top();
            events_.pop();
            now_ = ev.time;
            dispatch(ev);
            if (cfg_.check_invariants) check_invariants();
        }
        return collect();
    }

private:
    struct Event {
        double time = 0.0;
        std::uint64_t seq = 0;
        EventKind kind = EventKind::SessionArrival;
        int cls = -1;
        std::uint64_t session = 0;
        int server = -1;
        std::uint64_t generation = 0;
    };
    struct EventAfter {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.seq > b.seq;
        }
    };

    struct SimJob {
        Job job;
        std::uint64_t order = 0;  // per-pool arrival order, FIFO audit
    };

    struct ServerState {
        int home = 0;          // pool the server is committed to
        bool busy = false;
        bool in_transit = false;
        SimJob work;
    };

    struct PoolState {
        std::deque<SimJob> queue;
        std::vector<int> idle;  // ids of idle members, ascending
        int in_service = 0;
        std::vector<std::uint64_t> active_sessions;
        std::int64_t jobs_emitted = 0;
        std::int64_t jobs_completed = 0;
        double last_job_arrival = -1.0;
        std::uint64_t next_order = 0;
        std::uint64_t last_dispatch_order = 0;
    };

    struct SessionRuntime {
        RandomStream stream;
        std::int64_t emitted = 0;
    };

    // --- setup ------------------------------------------------------------

    void initialize() {
        pools_.assign(num_classes_, PoolState{});
        servers_.assign(static_cast<std::size_t>(total_servers_), ServerState{});
        accepted_.assign(num_classes_, 0);
        rejected_.assign(num_classes_, 0);
        completed_.assign(num_classes_, 0);
        violated_.assign(num_classes_, 0);
        arrival_serial_.assign(num_classes_, 0);
        arrival_generation_.assign(num_classes_, 0);
        metrics_ = MetricsAccumulator(num_classes_, cfg_.run.sample_period);

        session_streams_.clear();
        for (std::size_t c = 0; c < num_classes_; ++c)
            session_streams_.push_back(RandomStream::keyed(seed_, c, kPurposeSessionArrivals));

        estimates_ = initial_estimates();
        reconfigure();
        // First allocation is an assignment, not a move: fill pools in order.
        {
            int sid = 0;
            for (std::size_t c = 0; c < num_classes_; ++c) {
                for (int i = 0; i < committed_[c]; ++i, ++sid) {
                    servers_[static_cast<std::size_t>(sid)].home = static_cast<int>(c);
                    pools_[c].idle.push_back(sid);
                }
            }
        }
        window_ = WindowStats{0.0, 0.0, std::vector<ClassWindowStats>(num_classes_)};
        window_events_seen_ = 0;

        for (std::size_t c = 0; c < num_classes_; ++c) schedule_session_arrival(static_cast<int>(c));
        if (cfg_.swap && cfg_.swap->period > 0.0)
            push(Event{cfg_.swap->period, next_seq_++, EventKind::LoadSwap});
        if (cfg_.run.sample_period <= cfg_.run.duration)
            push(Event{cfg_.run.sample_period, next_seq_++, EventKind::SampleTick});
    }

    std::vector<TrafficEstimate> initial_estimates() const {
        if (cfg_.policy.admission == AdmissionPolicyKind::OracleThreshold)
            return true_estimates();
        // Cold start: no measured traffic yet, contract service times,
        // Markovian variability.
        std::vector<TrafficEstimate> est(num_classes_);
        for (std::size_t c = 0; c < num_classes_; ++c)
            est[c] = TrafficEstimate{static_cast<int>(c), 0.0, classes_[c].mean_service_time,
                                     1.0, 1.0, 0.0};
        return est;
    }

    std::vector<TrafficEstimate> true_estimates() const {
        std::vector<TrafficEstimate> est(num_classes_);
        for (std::size_t c = 0; c < num_classes_; ++c) {
            est[c] = TrafficEstimate{
                static_cast<int>(c),
                static_cast<double>(classes_[c].jobs_per_session) * traffic_[c].delta,
                classes_[c].mean_service_time,
                arrival_squared_cv(traffic_[c].job_arrivals),
                1.0,  // exponential service
                traffic_[c].delta,
            };
        }
        return est;
    }

    // --- event plumbing ----------------------------------------------------

    void push(Event ev) { events_.push(ev); }

    void dispatch(const Event& ev) {
        switch (ev.kind) {
            case EventKind::SessionArrival: on_session_arrival(ev); break;
            case EventKind::JobArrival: on_job_arrival(ev); break;
            case EventKind::JobCompletion: on_job_completion(ev); break;
            case EventKind::LoadSwap: on_load_swap(); break;
            case EventKind::SampleTick: on_sample_tick(); break;
            case EventKind::ServerMigrated: on_server_migrated(ev.server); break;
            case EventKind::WindowBoundary: break;  // synthesized for traces only
        }
    }

    void emit_trace(EventKind kind, int cls, std::uint64_t session) {
        if (!trace_) return;
        TraceRecord rec;
        rec.time = now_;
        rec.kind = kind;
        rec.class_index = cls;
        rec.session_id = session;
        if (cls >= 0) {
            rec.queue_length = static_cast<std::int64_t>(pools_[static_cast<std::size_t>(cls)].queue.size());
            rec.busy_servers = pools_[static_cast<std::size_t>(cls)].in_service;
        } else {
            for (const auto& p : pools_) {
                rec.queue_length += static_cast<std::int64_t>(p.queue.size());
                rec.busy_servers += p.in_service;
            }
        }
        trace_(rec);
    }

    // --- session lifecycle --------------------------------------------------

    void schedule_session_arrival(int cls) {
        const double delta = traffic_[static_cast<std::size_t>(cls)].delta;
        if (!(delta > 0.0)) return;
        const double gap = session_streams_[static_cast<std::size_t>(cls)].exponential(1.0 / delta);
        push(Event{now_ + gap, next_seq_++, EventKind::SessionArrival, cls, 0, -1,
                   arrival_generation_[static_cast<std::size_t>(cls)]});
    }

    void on_session_arrival(const Event& ev) {
        const auto cls = static_cast<std::size_t>(ev.cls);
        if (ev.generation != arrival_generation_[cls]) return;  // rescheduled by a load swap

        window_.per_class[cls].session_arrivals += 1;
        note_session_event();
        schedule_session_arrival(ev.cls);

        const std::uint64_t serial = arrival_serial_[cls]++;
        const std::uint64_t id = static_cast<std::uint64_t>(sessions_.size());
        SessionRecord rec;
        rec.session_id = id;
        rec.class_index = ev.cls;
        rec.arrival_time = now_;
        sessions_.push_back(rec);

        AdmissionDecision decision;
        switch (cfg_.policy.admission) {
            case AdmissionPolicyKind::AdmitAll:
                decision.accept = true;
                break;
            case AdmissionPolicyKind::Threshold:
            case AdmissionPolicyKind::OracleThreshold:
                decision.accept = threshold_decide(
                    static_cast<std::int64_t>(pools_[cls].active_sessions.size()),
                    thresholds_.caps[cls]);
                break;
            case AdmissionPolicyKind::CurrentState:
                decision = current_state_decide(snapshot(), ev.cls, estimates_, classes_);
                break;
        }

        if (!decision.accept) {
            sessions_[id].state = SessionState::Rejected;
            ++rejected_[cls];
            window_.per_class[cls].turned_away_jobs += classes_[cls].jobs_per_session;
            metrics_.on_reject(cls);
            emit_trace(EventKind::SessionArrival, ev.cls, id);
            return;
        }

        if (decision.move) move_one_server(decision.move->from_class, decision.move->to_class);

        pools_[cls].active_sessions.push_back(id);
        ++accepted_[cls];
        metrics_.on_accept(cls);

        SessionRuntime rt{RandomStream::keyed(seed_, cls, serial, kPurposeSessionDraws), 0};
        const double first_gap =
            draw_interarrival(traffic_[cls].job_arrivals, classes_[cls].job_rate, rt.stream);
        runtime_.emplace(id, std::move(rt));
        push(Event{now_ + first_gap, next_seq_++, EventKind::JobArrival, ev.cls, id});
        emit_trace(EventKind::SessionArrival, ev.cls, id);
    }

    void on_job_arrival(const Event& ev) {
        const auto cls = static_cast<std::size_t>(ev.cls);
        PoolState& pool = pools_[cls];
        SessionRuntime& rt = runtime_.at(ev.session);

        SimJob j;
        j.job.session_id = ev.session;
        j.job.class_index = ev.cls;
        j.job.arrival_time = now_;
        j.job.service_demand = rt.stream.exponential(classes_[cls].mean_service_time);
        j.order = pool.next_order++;
        ++rt.emitted;
        ++pool.jobs_emitted;

        ClassWindowStats& w = window_.per_class[cls];
        ++w.job_arrivals;
        if (pool.last_job_arrival >= 0.0) w.add_interarrival(now_ - pool.last_job_arrival);
        pool.last_job_arrival = now_;

        if (rt.emitted < classes_[cls].jobs_per_session) {
            const double gap =
                draw_interarrival(traffic_[cls].job_arrivals, classes_[cls].job_rate, rt.stream);
            push(Event{now_ + gap, next_seq_++, EventKind::JobArrival, ev.cls, ev.session});
        }

        if (!pool.idle.empty()) {
            const int sid = pool.idle.front();
            pool.idle.erase(pool.idle.begin());
            start_service(sid, j);
        } else {
            pool.queue.push_back(j);
        }
        emit_trace(EventKind::JobArrival, ev.cls, ev.session);
    }

    void start_service(int server_id, SimJob j) {
        const auto cls = static_cast<std::size_t>(j.job.class_index);
        PoolState& pool = pools_[cls];
        if (cfg_.check_invariants && pool.next_order > 0 && pool.last_dispatch_order > j.order)
            throw SimulationInvariantViolation("FIFO order broken in pool " +
                                               std::to_string(cls));
        pool.last_dispatch_order = j.order;

        j.job.wait = now_ - j.job.arrival_time;
        ServerState& sv = servers_[static_cast<std::size_t>(server_id)];
        sv.busy = true;
        sv.work = j;
        ++pool.in_service;
        push(Event{now_ + j.job.service_demand, next_seq_++, EventKind::JobCompletion,
                   j.job.class_index, j.job.session_id, server_id});
    }

    void on_job_completion(const Event& ev) {
        ServerState& sv = servers_[static_cast<std::size_t>(ev.server)];
        const SimJob j = sv.work;
        const auto cls = static_cast<std::size_t>(j.job.class_index);
        PoolState& pool = pools_[cls];

        --pool.in_service;
        ++pool.jobs_completed;
        window_.per_class[cls].add_service(j.job.service_demand);

        SessionRecord& rec = sessions_[j.job.session_id];
        rec.cumulative_wait += j.job.wait;
        rec.jobs_completed += 1;
        const bool session_done = rec.jobs_completed == classes_[cls].jobs_per_session;
        if (session_done) finalize(rec);

        sv.busy = false;
        if (sv.home != j.job.class_index) {
            begin_migration(ev.server);
        } else {
            take_next_or_idle(ev.server);
        }
        emit_trace(EventKind::JobCompletion, j.job.class_index, j.job.session_id);
        if (session_done) note_session_event();
    }

    void finalize(SessionRecord& rec) {
        const auto cls = static_cast<std::size_t>(rec.class_index);
        rec.state = SessionState::Completed;
        const double net = finalize_session(rec, classes_[cls]);
        const bool violated = rec.mean_wait() > classes_[cls].obligation;
        ++completed_[cls];
        if (violated) ++violated_[cls];
        metrics_.on_complete(cls, net, violated);

        auto& act = pools_[cls].active_sessions;
        act.erase(std::find(act.begin(), act.end(), rec.session_id));
        runtime_.erase(rec.session_id);
    }

    // --- servers and reallocation -------------------------------------------

    void take_next_or_idle(int server_id) {
        ServerState& sv = servers_[static_cast<std::size_t>(server_id)];
        PoolState& pool = pools_[static_cast<std::size_t>(sv.home)];
        if (!pool.queue.empty()) {
            SimJob j = pool.queue.front();
            pool.queue.pop_front();
            start_service(server_id, j);
        } else {
            pool.idle.insert(std::lower_bound(pool.idle.begin(), pool.idle.end(), server_id),
                             server_id);
        }
    }

    void begin_migration(int server_id) {
        ServerState& sv = servers_[static_cast<std::size_t>(server_id)];
        if (cfg_.cluster.switch_delay > 0.0) {
            sv.in_transit = true;
            push(Event{now_ + cfg_.cluster.switch_delay, next_seq_++, EventKind::ServerMigrated,
                       sv.home, 0, server_id});
        } else {
            take_next_or_idle(server_id);
        }
    }

    void on_server_migrated(int server_id) {
        ServerState& sv = servers_[static_cast<std::size_t>(server_id)];
        sv.in_transit = false;
        take_next_or_idle(server_id);
    }

    /// Reassigns one committed server from one pool to another. Idle donors
    /// leave immediately; busy donors finish their current job first.
    void move_one_server(int from, int to) {
        const auto f = static_cast<std::size_t>(from);
        int sid = -1;
        if (!pools_[f].idle.empty()) {
            sid = pools_[f].idle.front();
        } else {
            for (std::size_t s = 0; s < servers_.size(); ++s) {
                const ServerState& sv = servers_[s];
                if (sv.home == from && sv.in_transit) {
                    sid = static_cast<int>(s);
                    break;
                }
            }
            if (sid < 0) {
                for (std::size_t s = 0; s < servers_.size(); ++s) {
                    const ServerState& sv = servers_[s];
                    if (sv.home == from && sv.busy) {
                        sid = static_cast<int>(s);
                        break;
                    }
                }
            }
        }
        if (sid < 0)
            throw SimulationInvariantViolation("no movable server in pool " +
                                               std::to_string(from));

        ServerState& sv = servers_[static_cast<std::size_t>(sid)];
        --committed_[f];
        ++committed_[static_cast<std::size_t>(to)];
        sv.home = to;
        if (!sv.busy && !sv.in_transit) {
            auto& idle = pools_[f].idle;
            idle.erase(std::find(idle.begin(), idle.end(), sid));
            begin_migration(sid);
        }
        // Busy or in-transit servers carry their new home with them.
    }

    void apply_allocation(const AllocationVector& target) {
        for (std::size_t c = 0; c < num_classes_; ++c) {
            while (committed_[c] > target[c]) {
                // Donate to the lowest-indexed pool still under target.
                std::size_t dest = num_classes_;
                for (std::size_t d = 0; d < num_classes_; ++d) {
                    if (committed_[d] < target[d]) {
                        dest = d;
                        break;
                    }
                }
                if (dest == num_classes_) return;  // sums match; nothing to do
                move_one_server(static_cast<int>(c), static_cast<int>(dest));
            }
        }
    }

    // --- observation windows and reconfiguration -----------------------------

    void note_session_event() {
        if (++window_events_seen_ < cfg_.policy.window_events) return;
        close_window();
    }

    void close_window() {
        window_.end = now_;
        if (cfg_.policy.admission == AdmissionPolicyKind::OracleThreshold) {
            estimates_ = true_estimates();
        } else {
            estimates_ = profiler_close_window(window_, estimates_, cfg_.policy.ewma_beta);
        }
        reconfigure();
        emit_trace(EventKind::WindowBoundary, -1, 0);
        window_ = WindowStats{now_, now_, std::vector<ClassWindowStats>(num_classes_)};
        for (auto& p : pools_) p.last_job_arrival = -1.0;
        window_events_seen_ = 0;
    }

    void reconfigure() {
        auto rc = window_boundary_reconfigure(classes_, estimates_, total_servers_,
                                              cfg_.policy.admission, cfg_.policy.epsilon,
                                              cfg_.policy.threshold_cap);
        thresholds_ = rc.thresholds;
        if (committed_.empty()) {
            committed_ = rc.allocation.servers;  // initial assignment
        } else {
            apply_allocation(rc.allocation);
        }
    }

    void on_load_swap() {
        if (!cfg_.swap) return;
        const auto a = static_cast<std::size_t>(cfg_.swap->class_a);
        const auto b = static_cast<std::size_t>(cfg_.swap->class_b);
        std::swap(traffic_[a].delta, traffic_[b].delta);
        ++arrival_generation_[a];
        ++arrival_generation_[b];
        schedule_session_arrival(static_cast<int>(a));
        schedule_session_arrival(static_cast<int>(b));
        push(Event{now_ + cfg_.swap->period, next_seq_++, EventKind::LoadSwap});
        if (cfg_.policy.admission == AdmissionPolicyKind::OracleThreshold) {
            estimates_ = true_estimates();
            reconfigure();
        }
        emit_trace(EventKind::LoadSwap, -1, 0);
    }

    void on_sample_tick() {
        metrics_.close_sample(now_);
        if (now_ + cfg_.run.sample_period <= cfg_.run.duration)
            push(Event{now_ + cfg_.run.sample_period, next_seq_++, EventKind::SampleTick});
        emit_trace(EventKind::SampleTick, -1, 0);
    }

    // --- policy support -------------------------------------------------------

    QueueStateView snapshot() const {
        QueueStateView view;
        view.classes.resize(num_classes_);
        for (std::size_t c = 0; c < num_classes_; ++c) {
            ClassStateView& cs = view.classes[c];
            cs.queue_length = static_cast<std::int64_t>(pools_[c].queue.size());
            cs.servers = committed_[c];
            cs.active_sessions.reserve(pools_[c].active_sessions.size());
            for (std::uint64_t id : pools_[c].active_sessions)
                cs.active_sessions.push_back(sessions_[id]);
        }
        return view;
    }

    // --- structural checks ------------------------------------------------------

    void check_invariants() const {
        int committed_total = 0;
        for (std::size_t c = 0; c < num_classes_; ++c) {
            const PoolState& p = pools_[c];
            if (!p.idle.empty() && !p.queue.empty())
                throw SimulationInvariantViolation("idle server with waiting jobs in pool " +
                                                   std::to_string(c));
            const auto queued = static_cast<std::int64_t>(p.queue.size());
            if (p.jobs_emitted != p.jobs_completed + queued + p.in_service)
                throw SimulationInvariantViolation("job conservation broken in pool " +
                                                   std::to_string(c));
            committed_total += committed_[c];
        }
        if (committed_total != total_servers_)
            throw SimulationInvariantViolation("allocation does not sum to cluster size");

        std::vector<int> homes(num_classes_, 0);
        for (const ServerState& sv : servers_) ++homes[static_cast<std::size_t>(sv.home)];
        for (std::size_t c = 0; c < num_classes_; ++c)
            if (homes[c] != committed_[c])
                throw SimulationInvariantViolation("server homes disagree with allocation");
    }

    // --- results ------------------------------------------------------------------

    RunResult collect() {
        RunResult r;
        r.duration = cfg_.run.duration;
        r.seed = seed_;
        r.samples = metrics_.samples();
        r.accepted = accepted_;
        r.rejected = rejected_;
        r.completed = completed_;
        r.violated = violated_;
        r.revenue = metrics_.total_revenue();

        double projected = r.revenue;
        for (const SessionRecord& s : sessions_) {
            if (s.state != SessionState::Active) continue;
            ++r.inflight_sessions;
            if (s.jobs_completed > 0) {
                const auto cls = static_cast<std::size_t>(s.class_index);
                projected +=
                    session_net_revenue(classes_[cls].reward, s.mean_wait(), classes_[cls].obligation);
            }
        }
        r.inflight_projected_revenue = projected;

        r.final_estimates = estimates_;
        r.final_allocation = committed_;
        for (const auto& p : pools_) {
            r.final_queue_lengths.push_back(static_cast<std::int64_t>(p.queue.size()));
            r.jobs_emitted.push_back(p.jobs_emitted);
            r.jobs_completed.push_back(p.jobs_completed);
            r.jobs_in_service.push_back(p.in_service);
        }
        r.sessions = std::move(sessions_);
        return r;
    }

    // --- state -----------------------------------------------------------------

    static constexpr std::uint64_t kPurposeSessionArrivals = 0;
    static constexpr std::uint64_t kPurposeSessionDraws = 2;

    ExperimentConfig cfg_;
    std::uint64_t seed_;
    std::size_t num_classes_;
    int total_servers_;

    std::vector<ServiceClass> classes_;
    std::vector<ClassTraffic> traffic_;  // deltas mutate on swaps

    std::priority_queue<Event, std::vector<Event>, EventAfter> events_;
    std::uint64_t next_seq_ = 0;
    double now_ = 0.0;

    std::vector<PoolState> pools_;
    std::vector<ServerState> servers_;
    std::vector<int> committed_;  // policy-committed allocation, sums to N

    std::vector<SessionRecord> sessions_;
    std::unordered_map<std::uint64_t, SessionRuntime> runtime_;

    std::vector<RandomStream> session_streams_;
    std::vector<std::uint64_t> arrival_serial_;
    std::vector<std::uint64_t> arrival_generation_;

    std::vector<TrafficEstimate> estimates_;
    ThresholdVector thresholds_;
    WindowStats window_;
    std::int64_t window_events_seen_ = 0;

    MetricsAccumulator metrics_{0, 600.0};
    std::vector<std::int64_t> accepted_, rejected_, completed_, violated_;

    TraceSink trace_;
};

/// Convenience wrapper for one replication.
inline RunResult run_simulation(const ExperimentConfig& cfg, std::uint64_t seed) {
    Simulator sim(cfg, seed);
    return sim.run();
}

}  // namespace slasim
