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
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "slasim/model.hpp"

namespace slasim {

/// One periodic sample of the run's economics.
struct MetricsSample {
    std::int64_t index = 0;
    double t_start = 0.0;
    double t_end = 0.0;
    double revenue = 0.0;       // net money booked in [t_start, t_end)
    double revenue_rate = 0.0;  // revenue / period
    std::vector<double> accept_rate;    // per class, admissions per second
    std::vector<double> complete_rate;  // per class, completions per second
    std::int64_t accepted = 0;
    std::int64_t rejected = 0;
    std::int64_t completed = 0;
    std::int64_t violated = 0;
    double rejection_fraction = 0.0;  // rejected / (accepted + rejected), 0 when idle
    double violation_fraction = 0.0;  // violated / completed, 0 when none completed
};

/// Net revenue of a finished session (all k jobs done).
inline double finalize_session(const SessionRecord& record, const ServiceClass& cls) {
    const double mean_wait =
        record.cumulative_wait / static_cast<double>(cls.jobs_per_session);
    return session_net_revenue(cls.reward, mean_wait, cls.obligation);
}

/// Books accept/reject/complete events into fixed-length sample windows.
/// Owned by the simulation thread; read out once the run is over.
class MetricsAccumulator {
public:
    MetricsAccumulator(std::size_t num_classes, double sample_period)
        : num_classes_(num_classes), period_(sample_period) {
        reset_window();
    }

    void on_accept(std::size_t cls) {
        ++win_accepted_;
        ++win_accept_by_class_[cls];
    }
    void on_reject(std::size_t /*cls*/) { ++win_rejected_; }

    void on_complete(std::size_t cls, double net_revenue, bool violated) {
        win_revenue_ += net_revenue;
        total_revenue_ += net_revenue;
        ++win_completed_;
        ++win_complete_by_class_[cls];
        if (violated) ++win_violated_;
    }

    /// Closes the sample ending at t_end (called every `sample_period`).
    void close_sample(double t_end) {
        MetricsSample s;
        s.index = static_cast<std::int64_t>(samples_.size());
        s.t_start = t_end - period_;
        s.t_end = t_end;
        s.revenue = win_revenue_;
        s.revenue_rate = win_revenue_ / period_;
        s.accepted = win_accepted_;
        s.rejected = win_rejected_;
        s.completed = win_completed_;
        s.violated = win_violated_;
        const std::int64_t arrivals = win_accepted_ + win_rejected_;
        s.rejection_fraction =
            arrivals > 0 ? static_cast<double>(win_rejected_) / static_cast<double>(arrivals) : 0.0;
        s.violation_fraction = win_completed_ > 0 ? static_cast<double>(win_violated_) /
                                                        static_cast<double>(win_completed_)
                                                  : 0.0;
        s.accept_rate.resize(num_classes_);
        s.complete_rate.resize(num_classes_);
        for (std::size_t c = 0; c < num_classes_; ++c) {
            s.accept_rate[c] = static_cast<double>(win_accept_by_class_[c]) / period_;
            s.complete_rate[c] = static_cast<double>(win_complete_by_class_[c]) / period_;
        }
        samples_.push_back(std::move(s));
        reset_window();
    }

    const std::vector<MetricsSample>& samples() const { return samples_; }
    double total_revenue() const { return total_revenue_; }

private:
    void reset_window() {
        win_revenue_ = 0.0;
        win_accepted_ = win_rejected_ = win_completed_ = win_violated_ = 0;
        win_accept_by_class_.assign(num_classes_, 0);
        win_complete_by_class_.assign(num_classes_, 0);
    }

    std::size_t num_classes_;
    double period_;
    std::vector<MetricsSample> samples_;
    double total_revenue_ = 0.0;

    double win_revenue_ = 0.0;
    std::int64_t win_accepted_ = 0, win_rejected_ = 0, win_completed_ = 0, win_violated_ = 0;
    std::vector<std::int64_t> win_accept_by_class_;
    std::vector<std::int64_t> win_complete_by_class_;
};

class InsufficientSamples : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Two-sided 97.5% Student-t points for df 1..120; the normal point serves
/// beyond the table. Four-decimal accuracy.
inline double t_quantile_975(std::int64_t df) {
    static constexpr std::array<double, 120> kTable = {
        12.7062, 4.3027, 3.1824, 2.7764, 2.5706, 2.4469,
        2.3646, 2.3060, 2.2622, 2.2281, 2.2010, 2.1788,
        2.1604, 2.1448, 2.1314, 2.1199, 2.1098, 2.1009,
        2.0930, 2.0860, 2.0796, 2.0739, 2.0687, 2.0639,
        2.0595, 2.0555, 2.0518, 2.0484, 2.0452, 2.0423,
        2.0395, 2.0369, 2.0345, 2.0322, 2.0301, 2.0281,
        2.0262, 2.0244, 2.0227, 2.0211, 2.0195, 2.0181,
        2.0167, 2.0154, 2.0141, 2.0129, 2.0117, 2.0106,
        2.0096, 2.0086, 2.0076, 2.0066, 2.0057, 2.0049,
        2.0040, 2.0032, 2.0025, 2.0017, 2.0010, 2.0003,
        1.9996, 1.9990, 1.9983, 1.9977, 1.9971, 1.9966,
        1.9960, 1.9955, 1.9949, 1.9944, 1.9939, 1.9935,
        1.9930, 1.9925, 1.9921, 1.9917, 1.9913, 1.9908,
        1.9905, 1.9901, 1.9897, 1.9893, 1.9890, 1.9886,
        1.9883, 1.9879, 1.9876, 1.9873, 1.9870, 1.9867,
        1.9864, 1.9861, 1.9858, 1.9855, 1.9853, 1.9850,
        1.9847, 1.9845, 1.9842, 1.9840, 1.9837, 1.9835,
        1.9833, 1.9830, 1.9828, 1.9826, 1.9824, 1.9822,
        1.9820, 1.9818, 1.9816, 1.9814, 1.9812, 1.9810,
        1.9808, 1.9806, 1.9804, 1.9803, 1.9801, 1.9799,
    };
    if (df < 1) throw std::invalid_argument("t_quantile_975: df must be >= 1");
    if (df <= 120) return kTable[static_cast<std::size_t>(df - 1)];
    return 1.959964;  // normal 97.5% point
}

struct ConfidenceInterval {
    double mean = 0.0;
    double half_width = 0.0;

    double low() const { return mean - half_width; }
    double high() const { return mean + half_width; }
};

/// mean +- t_{0.975, n-1} * s / sqrt(n) with the sample (n-1) standard
/// deviation. Only the 95% level is supported.
inline ConfidenceInterval student_t_ci(const std::vector<double>& samples,
                                       double confidence = 0.95) {
    if (std::abs(confidence - 0.95) > 1e-12)
        throw std::invalid_argument("student_t_ci: only 95% confidence is supported");
    const std::size_t n = samples.size();
    if (n < 2) throw InsufficientSamples("student_t_ci: need at least 2 samples");

    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    const double t = t_quantile_975(static_cast<std::int64_t>(n) - 1);
    return ConfidenceInterval{mean, t * sd / std::sqrt(static_cast<double>(n))};
}

/// Empirical distribution of per-session mean waits for one class.
class DelayCdf {
public:
    explicit DelayCdf(std::vector<double> session_mean_waits)
        : values_(std::move(session_mean_waits)) {
        if (values_.empty()) throw NoData("DelayCdf: no sessions");
        std::sort(values_.begin(), values_.end());
    }

    /// Fraction of sessions whose mean wait is <= x.
    double at(double x) const {
        const auto it = std::upper_bound(values_.begin(), values_.end(), x);
        return static_cast<double>(it - values_.begin()) / static_cast<double>(values_.size());
    }

    double quantile(double p) const {
        const auto idx = static_cast<std::size_t>(
            std::clamp(p, 0.0, 1.0) * static_cast<double>(values_.size() - 1));
        return values_[idx];
    }

    const std::vector<double>& values() const { return values_; }

private:
    std::vector<double> values_;
};

/// Session mean waits of `class_index`, completed sessions always, active
/// ones (partial means) when include_inflight is set.
inline DelayCdf delay_cdf(const std::vector<SessionRecord>& sessions, int class_index,
                          bool include_inflight = false) {
    std::vector<double> waits;
    for (const SessionRecord& s : sessions) {
        if (s.class_index != class_index) continue;
        if (s.state == SessionState::Completed ||
            (include_inflight && s.state == SessionState::Active && s.jobs_completed > 0)) {
            waits.push_back(s.mean_wait());
        }
    }
    return DelayCdf(std::move(waits));
}

struct RateSummary {
    std::vector<double> rejection_fraction;  // per class
    std::vector<double> violation_fraction;  // per class, among completed
    double total_rejection_fraction = 0.0;
    double total_violation_fraction = 0.0;
};

inline RateSummary rejection_and_violation_rates(const std::vector<std::int64_t>& accepted,
                                                 const std::vector<std::int64_t>& rejected,
                                                 const std::vector<std::int64_t>& completed,
                                                 const std::vector<std::int64_t>& violated) {
    const std::size_t m = accepted.size();
    RateSummary out;
    out.rejection_fraction.resize(m, 0.0);
    out.violation_fraction.resize(m, 0.0);
    std::int64_t arr = 0, rej = 0, comp = 0, viol = 0;
    for (std::size_t c = 0; c < m; ++c) {
        const std::int64_t arrivals = accepted[c] + rejected[c];
        if (arrivals > 0)
            out.rejection_fraction[c] =
                static_cast<double>(rejected[c]) / static_cast<double>(arrivals);
        if (completed[c] > 0)
            out.violation_fraction[c] =
                static_cast<double>(violated[c]) / static_cast<double>(completed[c]);
        arr += arrivals;
        rej += rejected[c];
        comp += completed[c];
        viol += violated[c];
    }
    if (arr > 0) out.total_rejection_fraction = static_cast<double>(rej) / static_cast<double>(arr);
    if (comp > 0)
        out.total_violation_fraction = static_cast<double>(viol) / static_cast<double>(comp);
    return out;
}

}  // namespace slasim
