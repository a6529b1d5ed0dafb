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

#include <optional>
#include <string>
#include <vector>

#include "slasim/config.hpp"

namespace slasim {

/// A named experiment: a base configuration plus, for the figure presets,
/// the admission policies to compare and the delta_4 sweep grid.
struct Preset {
    std::string name;
    std::string description;
    ExperimentConfig config;
    std::vector<AdmissionPolicyKind> policies;  // empty = single run of config
    std::vector<double> delta4_values;          // sweep grid over classes[4].delta
    bool with_delay_cdf = false;                // also emit the delay-CDF companion
};

namespace detail {

inline ClassConfig make_class(int position, double b, double gamma, double delta,
                              std::int64_t k, double q, RewardModel reward,
                              ArrivalProcess arrivals = ArrivalProcess::Exponential) {
    ClassConfig cc;
    cc.service.index = position;
    cc.service.mean_service_time = b;
    cc.service.job_rate = gamma;
    cc.service.jobs_per_session = k;
    cc.service.obligation = q;
    cc.service.importance = 1.0;
    cc.service.reward = std::move(reward);
    cc.traffic.delta = delta;
    cc.traffic.job_arrivals = arrivals;
    return cc;
}

inline std::vector<double> delta4_grid() {
    return {0.02, 0.04, 0.06, 0.08, 0.10, 0.12, 0.14, 0.16, 0.18, 0.20};
}

}  // namespace detail

/// The four-class, twenty-server base configuration used by every built-in
/// experiment. Session rates (0.10, 0.04, 0.08, delta4); unit service times;
/// the obligation equals the mean service time; flat charge 10 / refund 10.
/// The presets reconfigure from the raw estimates of the previous window
/// (beta 1.0) and size windows so even the rarest class collects a usable
/// handful of session observations.
inline ExperimentConfig table1_config(double delta4 = 0.02) {
    ExperimentConfig cfg;
    cfg.cluster.servers = 20;
    cfg.cluster.switch_delay = 0.0;
    cfg.policy.admission = AdmissionPolicyKind::AdmitAll;
    cfg.policy.window_events = 100;
    cfg.policy.ewma_beta = 1.0;
    cfg.run.duration = 7200.0;
    cfg.run.sample_period = 600.0;
    cfg.run.seed = 1;
    cfg.run.replications = 1;
    cfg.classes = {
        detail::make_class(0, 1.0, 2.0, 0.10, 50, 1.0, FlatReward{10.0, 10.0}),
        detail::make_class(1, 1.0, 2.0, 0.04, 50, 1.0, FlatReward{10.0, 10.0}),
        detail::make_class(2, 1.0, 2.0, 0.08, 50, 1.0, FlatReward{10.0, 10.0}),
        detail::make_class(3, 1.0, 1.0, delta4, 50, 1.0, FlatReward{10.0, 10.0}),
    };
    return cfg;
}

inline std::vector<Preset> list_presets() {
    std::vector<Preset> out;
    const std::vector<double> charges = {10.0, 20.0, 30.0, 40.0};

    {
        Preset p;
        p.name = "table1";
        p.description = "base 4-class cluster, flat c=r=10, single admit-all run";
        p.config = table1_config();
        out.push_back(std::move(p));
    }
    {
        Preset p;
        p.name = "fig6a";
        p.description = "flat penalties, c=r=10, revenue vs delta4";
        p.config = table1_config();
        p.config.run.replications = 5;
        p.policies = {AdmissionPolicyKind::AdmitAll, AdmissionPolicyKind::Threshold,
                      AdmissionPolicyKind::CurrentState};
        p.delta4_values = detail::delta4_grid();
        out.push_back(std::move(p));
    }
    {
        Preset p;
        p.name = "fig6c";
        p.description = "flat penalties, c=(10,20,30,40), r=2c";
        p.config = table1_config();
        p.config.run.replications = 5;
        for (std::size_t c = 0; c < 4; ++c)
            p.config.classes[c].service.reward = FlatReward{charges[c], 2.0 * charges[c]};
        p.policies = {AdmissionPolicyKind::AdmitAll, AdmissionPolicyKind::Threshold,
                      AdmissionPolicyKind::CurrentState};
        p.delta4_values = detail::delta4_grid();
        out.push_back(std::move(p));
    }
    {
        Preset p;
        p.name = "fig7a";
        p.description = "bursty job arrivals (squared CV 6.12), c=(10,20,30,40), r=2c";
        p.config = table1_config();
        p.config.run.replications = 5;
        for (std::size_t c = 0; c < 4; ++c) {
            p.config.classes[c].service.reward = FlatReward{charges[c], 2.0 * charges[c]};
            p.config.classes[c].traffic.job_arrivals = ArrivalProcess::Bursty;
        }
        p.policies = {AdmissionPolicyKind::AdmitAll, AdmissionPolicyKind::Threshold,
                      AdmissionPolicyKind::CurrentState};
        p.delta4_values = detail::delta4_grid();
        out.push_back(std::move(p));
    }
    {
        Preset p;
        p.name = "fig7b";
        p.description = "delta_1/delta_2 swapped every 300 s, c=r=10";
        p.config = table1_config();
        p.config.run.replications = 5;
        p.config.swap = SwapSpec{300.0, 0, 1};
        p.policies = {AdmissionPolicyKind::Threshold, AdmissionPolicyKind::CurrentState,
                      AdmissionPolicyKind::OracleThreshold};
        p.delta4_values = detail::delta4_grid();
        out.push_back(std::move(p));
    }
    {
        Preset p;
        p.name = "fig8a";
        p.description = "proportional penalties, c=(10,20,30,40), r=c/2";
        p.config = table1_config();
        p.config.run.replications = 5;
        for (std::size_t c = 0; c < 4; ++c)
            p.config.classes[c].service.reward = ProportionalReward{charges[c], charges[c] / 2.0};
        p.policies = {AdmissionPolicyKind::AdmitAll, AdmissionPolicyKind::Threshold,
                      AdmissionPolicyKind::CurrentState};
        p.delta4_values = detail::delta4_grid();
        p.with_delay_cdf = true;
        out.push_back(std::move(p));
    }
    {
        Preset p;
        p.name = "fig9a";
        p.description = "bounded proportional, t=2q, r''=2r, r'=r/2 (base r=c/2)";
        p.config = table1_config();
        p.config.run.replications = 5;
        for (std::size_t c = 0; c < 4; ++c) {
            const double base = charges[c] / 2.0;
            p.config.classes[c].service.reward = BoundedProportionalReward{
                charges[c], base / 2.0, 2.0 * p.config.classes[c].service.obligation, 2.0 * base};
        }
        p.policies = {AdmissionPolicyKind::AdmitAll, AdmissionPolicyKind::Threshold,
                      AdmissionPolicyKind::CurrentState};
        p.delta4_values = detail::delta4_grid();
        out.push_back(std::move(p));
    }
    {
        Preset p;
        p.name = "fig9b";
        p.description = "bounded proportional, t=5q, r''=5r, r'=r/2 (base r=c/2)";
        p.config = table1_config();
        p.config.run.replications = 5;
        for (std::size_t c = 0; c < 4; ++c) {
            const double base = charges[c] / 2.0;
            p.config.classes[c].service.reward = BoundedProportionalReward{
                charges[c], base / 2.0, 5.0 * p.config.classes[c].service.obligation, 5.0 * base};
        }
        p.policies = {AdmissionPolicyKind::AdmitAll, AdmissionPolicyKind::Threshold,
                      AdmissionPolicyKind::CurrentState};
        p.delta4_values = detail::delta4_grid();
        out.push_back(std::move(p));
    }
    return out;
}

inline std::optional<Preset> get_preset(const std::string& name) {
    for (auto& p : list_presets())
        if (p.name == name) return p;
    return std::nullopt;
}

}  // namespace slasim
