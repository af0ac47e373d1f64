#pragma once

// Test-only oracles, independent of the library's computation paths:
// exhaustive enumeration of the one-hot RBM, tanh-sinh quadrature for the
// truncated-exponential and Beta integrals, and central finite differences.

#include <cmath>
#include <functional>
#include <vector>

#include "rbnet/mat.hpp"
#include "rbnet/network.hpp"
#include "rbnet/rbm_onehot.hpp"
#include "rbnet/sbm_block.hpp"
#include "rbnet/special.hpp"

namespace oracles {

using rbnet::Mat;
using rbnet::RbmParams;

inline double energy_onehot(const RbmParams& p, const std::vector<int>& y, int z) {
    double e = p.v[z];
    for (int j = 0; j < p.m(); ++j)
        if (y[j]) e += p.W(j, z) + p.u[j];
    return e;
}

// Brute-force ln sum over all 2^m * k configurations.
inline double log_partition_enum(const RbmParams& p) {
    const int m = p.m(), k = p.k();
    std::vector<double> terms;
    std::vector<int> y(m, 0);
    for (long long mask = 0; mask < (1LL << m); ++mask) {
        for (int j = 0; j < m; ++j) y[j] = (mask >> j) & 1;
        for (int z = 0; z < k; ++z) terms.push_back(energy_onehot(p, y, z));
    }
    double mx = terms[0];
    for (double t : terms) mx = std::max(mx, t);
    double s = 0.0;
    for (double t : terms) s += std::exp(t - mx);
    return mx + std::log(s);
}

struct EnumMoments {
    Mat eyz;
    std::vector<double> ez, ey;
};

inline EnumMoments moments_enum(const RbmParams& p) {
    const int m = p.m(), k = p.k();
    const double ln_psi = log_partition_enum(p);
    EnumMoments mo;
    mo.eyz = Mat(m, k);
    mo.ez.assign(k, 0.0);
    mo.ey.assign(m, 0.0);
    std::vector<int> y(m, 0);
    for (long long mask = 0; mask < (1LL << m); ++mask) {
        for (int j = 0; j < m; ++j) y[j] = (mask >> j) & 1;
        for (int z = 0; z < k; ++z) {
            double pr = std::exp(energy_onehot(p, y, z) - ln_psi);
            mo.ez[z] += pr;
            for (int j = 0; j < m; ++j)
                if (y[j]) {
                    mo.ey[j] += pr;
                    mo.eyz(j, z) += pr;
                }
        }
    }
    return mo;
}

// P(z = l | y) by direct normalization over communities.
inline std::vector<double> cond_z_enum(const RbmParams& p, const std::vector<int>& y) {
    const int k = p.k();
    std::vector<double> w(k);
    for (int z = 0; z < k; ++z) w[z] = std::exp(energy_onehot(p, y, z));
    double s = 0.0;
    for (double x : w) s += x;
    for (auto& x : w) x /= s;
    return w;
}

// Tanh-sinh quadrature on (0,1); handles endpoint singularities like ln(x).
// x(t) = (1 + tanh(pi/2 sinh t))/2 with symmetric nodes evaluated until the
// weights underflow; levels halve h until the totals agree.
inline double integrate01(const std::function<double(double)>& f, int levels = 12) {
    double h = 1.0;
    auto node = [&](double t, double& x, double& w) {
        double s = std::sinh(t);
        double c = std::cosh(t);
        double tanh_arg = (M_PI / 2.0) * s;
        double sech = 1.0 / std::cosh(tanh_arg);
        x = 0.5 * (1.0 + std::tanh(tanh_arg));
        w = (M_PI / 4.0) * c * sech * sech;
    };
    double total = 0.0;
    {
        double x, w;
        node(0.0, x, w);
        total = f(x) * w;
        for (int j = 1; j < 60; ++j) {
            double t = j * h;
            node(t, x, w);
            if (w < 1e-300) break;
            double xl = 1.0 - x;  // symmetric node
            if (x > 0.0 && x < 1.0) total += f(x) * w;
            if (xl > 0.0 && xl < 1.0) total += f(xl) * w;
        }
        total *= h;
    }
    for (int lvl = 1; lvl <= levels; ++lvl) {
        h *= 0.5;
        double add = 0.0;
        for (int j = 1; j < (60 << lvl); j += 2) {
            double t = j * h;
            double x, w;
            node(t, x, w);
            if (w < 1e-300) break;
            double xl = 1.0 - x;
            if (x > 0.0 && x < 1.0) add += f(x) * w;
            if (xl > 0.0 && xl < 1.0) add += f(xl) * w;
        }
        double next = total * 0.5 + add * h;
        if (std::abs(next - total) < 1e-13 * (1.0 + std::abs(next)) && lvl >= 6) {
            total = next;
            break;
        }
        total = next;
    }
    return total;
}

inline double central_diff(const std::function<double(double)>& f, double x, double h = 1e-5) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

// ln P(A, Y) for tiny instances: enumerate Z over k^n, integrate B exactly
// (Bernoulli likelihood against a Beta prior is a Beta function ratio).
inline double log_marginal_likelihood_enum(const rbnet::AttributedNetwork& net, const RbmParams& p,
                                           const rbnet::BlockPrior& prior) {
    const int n = net.n, k = p.k();
    const double ln_psi = log_partition_enum(p);
    std::vector<int> z(n, 0);
    std::vector<double> terms;
    for (;;) {
        // ln P(Y, Z) for this assignment
        double lp = 0.0;
        for (int i = 0; i < n; ++i) {
            std::vector<int> y(p.m(), 0);
            for (auto& [j, val] : net.y_rows[i]) y[j] = val != 0.0 ? 1 : 0;
            lp += energy_onehot(p, y, z[i]) - ln_psi;
        }
        // Integrate B: per block pair, count edges and non-edges under Z.
        Mat e(k, k), ne(k, k);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                if (net.has_edge(i, j))
                    e(z[i], z[j]) += 1.0;
                else
                    ne(z[i], z[j]) += 1.0;
            }
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b)
                lp += rbnet::ln_beta(prior.alpha(a, b) + e(a, b), prior.beta(a, b) + ne(a, b)) -
                      rbnet::ln_beta(prior.alpha(a, b), prior.beta(a, b));
        terms.push_back(lp);
        int pos = 0;
        while (pos < n && ++z[pos] == k) z[pos++] = 0;
        if (pos == n) break;
    }
    double mx = terms[0];
    for (double t : terms) mx = std::max(mx, t);
    double s = 0.0;
    for (double t : terms) s += std::exp(t - mx);
    return mx + std::log(s);
}

}  // namespace oracles
