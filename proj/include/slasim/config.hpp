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
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "slasim/model.hpp"
#include "slasim/policy.hpp"

namespace slasim {

enum class ArrivalProcess { Exponential, Bursty };

/// Per-class offered traffic. The bursty process is a two-phase mixture:
/// w.p. 0.8 an exponential of mean 1/(5 gamma), else of mean 4.2/gamma,
/// which keeps the mean at 1/gamma and lifts the squared CV to 6.12.
struct ClassTraffic {
    double delta = 0.0;  // session arrivals per second
    ArrivalProcess job_arrivals = ArrivalProcess::Exponential;
};

inline constexpr double kBurstyFastShare = 0.8;
inline constexpr double kBurstyFastFactor = 1.0 / 5.0;  // mean 1/(5 gamma)
inline constexpr double kBurstySlowFactor = 4.2;        // mean 4.2/gamma

/// Squared coefficient of variation of the job inter-arrival process.
inline double arrival_squared_cv(ArrivalProcess process) {
    if (process == ArrivalProcess::Exponential) return 1.0;
    const double p = kBurstyFastShare;
    const double m1 = p * kBurstyFastFactor + (1.0 - p) * kBurstySlowFactor;
    const double m2 = p * 2.0 * kBurstyFastFactor * kBurstyFastFactor +
                      (1.0 - p) * 2.0 * kBurstySlowFactor * kBurstySlowFactor;
    return m2 / (m1 * m1) - 1.0;
}

/// Periodic exchange of the session arrival rates of two classes.
struct SwapSpec {
    double period = 0.0;  // seconds between swaps
    int class_a = 0;      // zero-based positions
    int class_b = 0;
};

struct ClusterConfig {
    int servers = 0;
    double switch_delay = 0.0;  // seconds a moved server is out of service
};

enum class AllocationKind { OfferedLoads };

struct PolicySettings {
    AllocationKind allocation = AllocationKind::OfferedLoads;
    AdmissionPolicyKind admission = AdmissionPolicyKind::AdmitAll;
    std::int64_t window_events = 50;  // session events per observation window
    double epsilon = 0.01;
    double ewma_beta = 0.5;
    std::int64_t threshold_cap = 0;  // 0 = automatic
};

struct RunSettings {
    double duration = 7200.0;
    std::uint64_t seed = 1;
    double sample_period = 600.0;
    int replications = 1;
};

struct ClassConfig {
    ServiceClass service;
    ClassTraffic traffic;
};

struct ExperimentConfig {
    ClusterConfig cluster;
    PolicySettings policy;
    RunSettings run;
    std::vector<ClassConfig> classes;
    std::optional<SwapSpec> swap;
    bool check_invariants = true;
    std::vector<std::string> advisories;  // filled during validation

    std::size_t num_classes() const { return classes.size(); }

    std::vector<ServiceClass> service_classes() const {
        std::vector<ServiceClass> out;
        out.reserve(classes.size());
        for (const auto& c : classes) out.push_back(c.service);
        return out;
    }

    /// Total offered load in server-equivalents, Sum k_i delta_i b_i.
    double total_offered_load() const {
        double rho = 0.0;
        for (const auto& c : classes)
            rho += static_cast<double>(c.service.jobs_per_session) * c.traffic.delta *
                   c.service.mean_service_time;
        return rho;
    }
};

class ParseError : public std::runtime_error {
public:
    ParseError(int line, std::string field, const std::string& what)
        : std::runtime_error("config line " + std::to_string(line) + " (" + field + "): " + what),
          line_(line),
          field_(std::move(field)) {}

    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    int line_;
    std::string field_;
};

inline const char* admission_name(AdmissionPolicyKind k) {
    switch (k) {
        case AdmissionPolicyKind::AdmitAll: return "admit_all";
        case AdmissionPolicyKind::Threshold: return "threshold";
        case AdmissionPolicyKind::CurrentState: return "current_state";
        case AdmissionPolicyKind::OracleThreshold: return "oracle_threshold";
    }
    return "?";
}

inline std::optional<AdmissionPolicyKind> admission_from_name(const std::string& s) {
    if (s == "admit_all") return AdmissionPolicyKind::AdmitAll;
    if (s == "threshold") return AdmissionPolicyKind::Threshold;
    if (s == "current_state") return AdmissionPolicyKind::CurrentState;
    if (s == "oracle_threshold") return AdmissionPolicyKind::OracleThreshold;
    return std::nullopt;
}

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline double parse_number(const std::string& v, int line, const std::string& field) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ParseError(line, field, "expected a number, got '" + v + "'");
    }
}

inline std::int64_t parse_int(const std::string& v, int line, const std::string& field) {
    try {
        std::size_t pos = 0;
        const std::int64_t x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ParseError(line, field, "expected an integer, got '" + v + "'");
    }
}

/// key=value pairs of a reward spec tail, e.g. "c=10 r=10".
inline std::map<std::string, double> parse_kv_numbers(std::istringstream& in, int line,
                                                      const std::string& field) {
    std::map<std::string, double> kv;
    std::string tok;
    while (in >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw ParseError(line, field, "expected key=value, got '" + tok + "'");
        kv[tok.substr(0, eq)] = parse_number(tok.substr(eq + 1), line, field);
    }
    return kv;
}

inline RewardModel parse_reward(const std::string& text, int line, const std::string& field) {
    std::istringstream in(text);
    std::string kind;
    in >> kind;
    auto kv = parse_kv_numbers(in, line, field);
    const auto need = [&](const char* key) {
        const auto it = kv.find(key);
        if (it == kv.end())
            throw ParseError(line, field, std::string("reward is missing '") + key + "'");
        return it->second;
    };
    if (kind == "flat") return FlatReward{need("c"), need("r")};
    if (kind == "proportional") return ProportionalReward{need("c"), need("r")};
    if (kind == "bounded_proportional")
        return BoundedProportionalReward{need("c"), need("r_prime"), need("t"), need("r_dprime")};
    throw ParseError(line, field, "unknown reward kind '" + kind + "'");
}

inline std::string reward_text(const RewardModel& model) {
    std::ostringstream out;
    if (const auto* f = std::get_if<FlatReward>(&model)) {
        out << "flat c=" << f->charge << " r=" << f->penalty;
    } else if (const auto* p = std::get_if<ProportionalReward>(&model)) {
        out << "proportional c=" << p->charge << " r=" << p->penalty_rate;
    } else {
        const auto& b = std::get<BoundedProportionalReward>(model);
        out << "bounded_proportional c=" << b.charge << " r_prime=" << b.penalty_rate
            << " t=" << b.bound << " r_dprime=" << b.capped_penalty;
    }
    return out.str();
}

}  // namespace detail

/// Parses the sectioned key=value experiment format (see README for the
/// grammar), fills defaults, validates every class, and attaches advisory
/// notes (e.g. over-saturation) without rejecting the configuration.
inline ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    bool have_servers = false;
    bool have_duration = false;
    std::map<int, ClassConfig> classes;     // 1-based id -> config
    std::map<int, bool> class_has_reward;
    std::optional<std::pair<int, int>> swap_classes;  // 1-based ids
    std::optional<double> swap_period;

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int class_id = 0;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ParseError(line_no, "section", "missing ']'");
            const std::string name = detail::trim(line.substr(1, line.size() - 2));
            if (name.rfind("class", 0) == 0) {
                const std::string id = detail::trim(name.substr(5));
                class_id = static_cast<int>(detail::parse_int(id, line_no, "class id"));
                if (class_id < 1) throw ParseError(line_no, "class id", "ids start at 1");
                section = "class";
                classes[class_id];  // default-construct
            } else if (name == "cluster" || name == "policy" || name == "run" || name == "swap") {
                section = name;
                if (name == "swap") swap_period.emplace(0.0);
            } else {
                throw ParseError(line_no, "section", "unknown section '" + name + "'");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ParseError(line_no, section, "expected key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const std::string field = section + "." + key;

        if (section == "cluster") {
            if (key == "servers") {
                cfg.cluster.servers = static_cast<int>(detail::parse_int(value, line_no, field));
                have_servers = true;
            } else if (key == "switch_delay") {
                cfg.cluster.switch_delay = detail::parse_number(value, line_no, field);
            } else {
                throw ParseError(line_no, field, "unknown key");
            }
        } else if (section == "policy") {
            if (key == "allocation") {
                if (value != "offered_loads")
                    throw ParseError(line_no, field, "unknown allocation '" + value + "'");
            } else if (key == "admission") {
                const auto kind = admission_from_name(value);
                if (!kind) throw ParseError(line_no, field, "unknown admission '" + value + "'");
                cfg.policy.admission = *kind;
            } else if (key == "window_events") {
                cfg.policy.window_events = detail::parse_int(value, line_no, field);
            } else if (key == "epsilon") {
                cfg.policy.epsilon = detail::parse_number(value, line_no, field);
            } else if (key == "ewma_beta") {
                cfg.policy.ewma_beta = detail::parse_number(value, line_no, field);
            } else if (key == "threshold_cap") {
                cfg.policy.threshold_cap =
                    value == "auto" ? 0 : detail::parse_int(value, line_no, field);
            } else {
                throw ParseError(line_no, field, "unknown key");
            }
        } else if (section == "run") {
            if (key == "duration") {
                cfg.run.duration = detail::parse_number(value, line_no, field);
                have_duration = true;
            } else if (key == "seed") {
                cfg.run.seed = static_cast<std::uint64_t>(detail::parse_int(value, line_no, field));
            } else if (key == "sample_period") {
                cfg.run.sample_period = detail::parse_number(value, line_no, field);
            } else if (key == "replications") {
                cfg.run.replications = static_cast<int>(detail::parse_int(value, line_no, field));
            } else {
                throw ParseError(line_no, field, "unknown key");
            }
        } else if (section == "swap") {
            if (key == "period") {
                swap_period = detail::parse_number(value, line_no, field);
            } else if (key == "classes") {
                std::istringstream pair(value);
                int a = 0, b = 0;
                if (!(pair >> a >> b)) throw ParseError(line_no, field, "expected two class ids");
                swap_classes = {a, b};
            } else {
                throw ParseError(line_no, field, "unknown key");
            }
        } else if (section == "class") {
            ClassConfig& cc = classes[class_id];
            const std::string cfield = "class " + std::to_string(class_id) + "." + key;
            if (key == "b") {
                cc.service.mean_service_time = detail::parse_number(value, line_no, cfield);
            } else if (key == "gamma") {
                cc.service.job_rate = detail::parse_number(value, line_no, cfield);
            } else if (key == "delta") {
                cc.traffic.delta = detail::parse_number(value, line_no, cfield);
            } else if (key == "k") {
                cc.service.jobs_per_session = detail::parse_int(value, line_no, cfield);
            } else if (key == "q") {
                cc.service.obligation = detail::parse_number(value, line_no, cfield);
            } else if (key == "alpha") {
                cc.service.importance = detail::parse_number(value, line_no, cfield);
            } else if (key == "arrivals") {
                if (value == "exponential") {
                    cc.traffic.job_arrivals = ArrivalProcess::Exponential;
                } else if (value == "bursty") {
                    cc.traffic.job_arrivals = ArrivalProcess::Bursty;
                } else {
                    throw ParseError(line_no, cfield, "unknown arrival process '" + value + "'");
                }
            } else if (key == "reward") {
                cc.service.reward = detail::parse_reward(value, line_no, cfield);
                class_has_reward[class_id] = true;
            } else {
                throw ParseError(line_no, cfield, "unknown key");
            }
        } else {
            throw ParseError(line_no, key, "key outside any section");
        }
    }

    if (!have_servers) throw ParseError(0, "cluster.servers", "missing required key");
    if (cfg.cluster.servers < 1) throw ParseError(0, "cluster.servers", "must be >= 1");
    if (!(cfg.cluster.switch_delay >= 0.0))
        throw ParseError(0, "cluster.switch_delay", "must be >= 0");
    if (!have_duration) throw ParseError(0, "run.duration", "missing required key");
    if (!(cfg.run.duration >= 0.0)) throw ParseError(0, "run.duration", "must be >= 0");
    if (!(cfg.run.sample_period > 0.0)) throw ParseError(0, "run.sample_period", "must be > 0");
    if (cfg.run.replications < 1) throw ParseError(0, "run.replications", "must be >= 1");
    if (cfg.policy.window_events < 1) throw ParseError(0, "policy.window_events", "must be >= 1");
    if (!(cfg.policy.epsilon > 0.0)) throw ParseError(0, "policy.epsilon", "must be > 0");
    if (!(cfg.policy.ewma_beta > 0.0 && cfg.policy.ewma_beta <= 1.0))
        throw ParseError(0, "policy.ewma_beta", "must be in (0, 1]");
    if (classes.empty()) throw ParseError(0, "class", "at least one [class N] section required");

    int expect = 1;
    for (auto& [id, cc] : classes) {
        if (id != expect)
            throw ParseError(0, "class " + std::to_string(id), "class ids must be 1..m contiguous");
        ++expect;
        if (!class_has_reward[id])
            throw ParseError(0, "class " + std::to_string(id) + ".reward", "missing required key");
        if (!(cc.traffic.delta >= 0.0))
            throw ParseError(0, "class " + std::to_string(id) + ".delta", "must be >= 0");
        cc.service.index = id - 1;
        cc.service = validate_class(cc.service);
        cfg.classes.push_back(cc);
    }

    if (swap_period.has_value() || swap_classes.has_value()) {
        if (!swap_classes || !swap_period || !(*swap_period > 0.0))
            throw ParseError(0, "swap", "swap needs period > 0 and a class pair");
        const auto [a, b] = *swap_classes;
        const int mm = static_cast<int>(cfg.classes.size());
        if (a < 1 || a > mm || b < 1 || b > mm || a == b)
            throw ParseError(0, "swap.classes", "class ids must name two distinct classes");
        cfg.swap = SwapSpec{*swap_period, a - 1, b - 1};
    }

    const double rho = cfg.total_offered_load();
    if (rho > static_cast<double>(cfg.cluster.servers)) {
        std::ostringstream note;
        note << "over-saturated: total offered load " << rho << " exceeds " << cfg.cluster.servers
             << " servers (" << 100.0 * rho / cfg.cluster.servers << "%)";
        cfg.advisories.push_back(note.str());
    }
    return cfg;
}

/// Inverse of parse_config for the supported schema.
inline std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "[cluster]\n";
    out << "servers = " << cfg.cluster.servers << "\n";
    out << "switch_delay = " << cfg.cluster.switch_delay << "\n\n";
    out << "[policy]\n";
    out << "allocation = offered_loads\n";
    out << "admission = " << admission_name(cfg.policy.admission) << "\n";
    out << "window_events = " << cfg.policy.window_events << "\n";
    out << "epsilon = " << cfg.policy.epsilon << "\n";
    out << "ewma_beta = " << cfg.policy.ewma_beta << "\n";
    if (cfg.policy.threshold_cap > 0) out << "threshold_cap = " << cfg.policy.threshold_cap << "\n";
    out << "\n[run]\n";
    out << "duration = " << cfg.run.duration << "\n";
    out << "seed = " << cfg.run.seed << "\n";
    out << "sample_period = " << cfg.run.sample_period << "\n";
    out << "replications = " << cfg.run.replications << "\n";
    for (std::size_t i = 0; i < cfg.classes.size(); ++i) {
        const ClassConfig& cc = cfg.classes[i];
        out << "\n[class " << (i + 1) << "]\n";
        out << "b = " << cc.service.mean_service_time << "\n";
        out << "gamma = " << cc.service.job_rate << "\n";
        out << "delta = " << cc.traffic.delta << "\n";
        out << "k = " << cc.service.jobs_per_session << "\n";
        out << "q = " << cc.service.obligation << "\n";
        out << "alpha = " << cc.service.importance << "\n";
        out << "arrivals = "
            << (cc.traffic.job_arrivals == ArrivalProcess::Bursty ? "bursty" : "exponential")
            << "\n";
        out << "reward = " << detail::reward_text(cc.service.reward) << "\n";
    }
    if (cfg.swap) {
        out << "\n[swap]\n";
        out << "period = " << cfg.swap->period << "\n";
        out << "classes = " << (cfg.swap->class_a + 1) << " " << (cfg.swap->class_b + 1) << "\n";
    }
    return out.str();
}

}  // namespace slasim
