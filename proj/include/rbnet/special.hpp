#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace rbnet {

inline double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    double e = std::exp(x);
    return e / (1.0 + e);
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

// ln(1 + e^x), overflow-safe.
inline double softplus(double x) {
    if (x > 35.0) return x;
    if (x < -35.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

inline double log_sum_exp(const double* x, int n) {
    double mx = x[0];
    for (int i = 1; i < n; ++i) mx = std::max(mx, x[i]);
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::exp(x[i] - mx);
    return mx + std::log(s);
}

// In-place softmax with max shift; returns the log-normalizer.
inline double softmax_inplace(double* x, int n) {
    double lse = log_sum_exp(x, n);
    for (int i = 0; i < n; ++i) x[i] = std::exp(x[i] - lse);
    return lse;
}

// Digamma via upward recurrence into the asymptotic range.
inline double digamma(double x) {
    double acc = 0.0;
    while (x < 8.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    return acc + std::log(x) - 0.5 * inv -
           inv2 * (1.0 / 12.0 -
                   inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
}

// Trigamma, same scheme.
inline double trigamma(double x) {
    double acc = 0.0;
    while (x < 8.0) {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    double inv = 1.0 / x;
    double inv2 = inv * inv;
    return acc +
           inv * (1.0 + 0.5 * inv +
                  inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * 5.0 / 66.0)))));
}

inline double ln_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// The truncated exponential family on [0,1] with density a*e^{a t}/(e^a - 1)
// shows up in three places: the continuous-covariate conditional, the simplex
// pair update, and their normalizers. |a| below this threshold switches to
// series; the density has a removable singularity at a = 0.
constexpr double kTruncExpSeriesEps = 1e-6;

// ln of the normalizer (e^a - 1)/a = integral of e^{a t} over [0,1].
inline double trunc_exp_log_norm(double a) {
    if (std::abs(a) < kTruncExpSeriesEps) return 0.5 * a + a * a / 24.0;
    if (a > 0.0) return a + std::log1p(-std::exp(-a)) - std::log(a);
    return std::log1p(-std::exp(a)) - std::log(-a);
}

// Mean of the truncated exponential: (e^a (a-1) + 1) / (a (e^a - 1)).
inline double trunc_exp_mean(double a) {
    if (std::abs(a) < kTruncExpSeriesEps) return 0.5 + a / 12.0;
    if (a > 0.0) {
        double em = std::exp(-a);
        return (a - 1.0 + em) / (a * (1.0 - em));
    }
    double e = std::exp(a);
    return (e * (a - 1.0) + 1.0) / (a * (e - 1.0));
}

// Inverse-CDF draw: t = ln(1 + u (e^a - 1)) / a, clamped to [0,1].
inline double trunc_exp_sample(double a, double u) {
    double t;
    if (std::abs(a) < kTruncExpSeriesEps) {
        t = u + a * u * (1.0 - u) * 0.5;
    } else if (a > 0.0) {
        t = 1.0 + std::log(u + (1.0 - u) * std::exp(-a)) / a;
    } else {
        t = std::log1p(u * std::expm1(a)) / a;
    }
    return std::clamp(t, 0.0, 1.0);
}

inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace rbnet
