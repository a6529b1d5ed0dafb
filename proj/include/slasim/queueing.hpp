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
#include <limits>
#include <stdexcept>
#include <vector>

namespace slasim {

/// Raised by the delay formulas when the offered load is at or above capacity.
/// Policy callers map this to "infinite wait / certain violation".
class UnstableSystem : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Per-class traffic statistics estimated over an observation window.
struct TrafficEstimate {
    int class_index = 0;
    double lambda_hat = 0.0;  // job arrivals per second
    double b_hat = 0.0;       // mean service time, seconds
    double ca2_hat = 1.0;     // squared CV of job inter-arrival times
    double cs2_hat = 1.0;     // squared CV of service times
    double delta_hat = 0.0;   // session arrivals per second
};

/// Stationary distribution of the number of active sessions in a loss system
/// truncated at M: probs[j] = P(j sessions active), j = 0..M.
struct LossDistribution {
    std::vector<double> probs;

    std::size_t threshold() const { return probs.size() - 1; }
    double blocking() const { return probs.back(); }
};

/// Erlang-B blocking probability for n servers offered a erlangs.
/// Computed with the standard recurrence B(n) = a B(n-1) / (n + a B(n-1)).
inline double erlang_b(int n, double a) {
    if (n < 0) throw std::invalid_argument("erlang_b: n must be >= 0");
    if (!(a >= 0.0)) throw std::invalid_argument("erlang_b: a must be >= 0");
    double b = 1.0;
    for (int j = 1; j <= n; ++j) {
        b = a * b / (static_cast<double>(j) + a * b);
    }
    return b;
}

/// Erlang-C probability that an arriving job has to wait, n servers, a < n.
inline double erlang_c(int n, double a) {
    if (n < 1) throw std::invalid_argument("erlang_c: n must be >= 1");
    if (!(a >= 0.0)) throw std::invalid_argument("erlang_c: a must be >= 0");
    if (a >= static_cast<double>(n)) throw UnstableSystem("erlang_c: offered load >= servers");
    const double b = erlang_b(n, a);
    const double c = static_cast<double>(n) * b / (static_cast<double>(n) - a * (1.0 - b));
    return std::clamp(c, 0.0, 1.0);
}

/// Mean waiting time in an M/M/n queue: E[W] = C(n, a) / (n mu - lambda).
inline double mmn_expected_wait(double lambda, double mu, int n) {
    if (n < 1) throw std::invalid_argument("mmn_expected_wait: n must be >= 1");
    if (!(mu > 0.0)) throw std::invalid_argument("mmn_expected_wait: mu must be > 0");
    if (lambda >= static_cast<double>(n) * mu) throw UnstableSystem("mmn_expected_wait: lambda >= n mu");
    if (lambda <= 0.0) return 0.0;
    return erlang_c(n, lambda / mu) / (static_cast<double>(n) * mu - lambda);
}

/// Waiting-time tail in an M/M/n queue: P(W > q) = C(n, a) exp(-(n mu - lambda) q).
inline double mmn_wait_tail(double lambda, double mu, int n, double q) {
    if (!(q >= 0.0)) throw std::invalid_argument("mmn_wait_tail: q must be >= 0");
    if (n < 1) throw std::invalid_argument("mmn_wait_tail: n must be >= 1");
    if (!(mu > 0.0)) throw std::invalid_argument("mmn_wait_tail: mu must be > 0");
    if (lambda >= static_cast<double>(n) * mu) throw UnstableSystem("mmn_wait_tail: lambda >= n mu");
    if (lambda <= 0.0) return 0.0;
    const double c = erlang_c(n, lambda / mu);
    return c * std::exp(-(static_cast<double>(n) * mu - lambda) * q);
}

/// Allen-Cunneen style estimate for a G/G/n queue: the Markovian mean wait
/// scaled by (ca2 + cs2) / 2. Exact for ca2 = cs2 = 1.
inline double ggn_expected_wait(double lambda, double b, double ca2, double cs2, int n) {
    if (!(b > 0.0)) throw std::invalid_argument("ggn_expected_wait: b must be > 0");
    if (!(ca2 >= 0.0) || !(cs2 >= 0.0))
        throw std::invalid_argument("ggn_expected_wait: squared CVs must be >= 0");
    if (lambda * b >= static_cast<double>(n)) throw UnstableSystem("ggn_expected_wait: lambda b >= n");
    return 0.5 * (ca2 + cs2) * mmn_expected_wait(lambda, 1.0 / b, n);
}

/// Truncated-Poisson stationary distribution of a loss system offered `a`
/// erlangs of sessions with admission threshold M. Ratio-form recurrence with
/// on-the-fly rescaling, so it stays finite for large a and M.
inline LossDistribution erlang_loss_distribution(double a, std::int64_t threshold) {
    if (!(a >= 0.0)) throw std::invalid_argument("erlang_loss_distribution: a must be >= 0");
    if (threshold < 0) throw std::invalid_argument("erlang_loss_distribution: M must be >= 0");

    std::vector<double> terms(static_cast<std::size_t>(threshold) + 1);
    terms[0] = 1.0;
    double sum = 1.0;
    constexpr double kRescale = 1e290;
    for (std::int64_t j = 1; j <= threshold; ++j) {
        double t = terms[static_cast<std::size_t>(j - 1)] * (a / static_cast<double>(j));
        if (t > kRescale) {
            for (std::int64_t l = 0; l < j; ++l) terms[static_cast<std::size_t>(l)] /= kRescale;
            sum /= kRescale;
            t /= kRescale;
        }
        terms[static_cast<std::size_t>(j)] = t;
        sum += t;
    }
    for (double& t : terms) t /= sum;
    return LossDistribution{std::move(terms)};
}

inline constexpr double kInfiniteWait = std::numeric_limits<double>::infinity();

/// ggn_expected_wait with instability folded into an infinite wait.
inline double ggn_wait_or_infinity(double lambda, double b, double ca2, double cs2, int n) {
    if (n < 1 || lambda * b >= static_cast<double>(n)) return kInfiniteWait;
    return ggn_expected_wait(lambda, b, ca2, cs2, n);
}

/// mmn_wait_tail with instability folded into a certain violation.
inline double mmn_tail_or_one(double lambda, double mu, int n, double q) {
    if (n < 1 || lambda >= static_cast<double>(n) * mu) return 1.0;
    return mmn_wait_tail(lambda, mu, n, q);
}

}  // namespace slasim
