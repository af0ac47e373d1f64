#include "rbnet/rbm_simplex.hpp"

#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rbnet/special.hpp"

namespace rbnet {

std::vector<double> simplex_cond_y_given_z(const SimplexRbmParams& p, const std::vector<double>& z) {
    const int m = p.m(), k = p.k();
    double s = 0.0;
    for (double zl : z) {
        if (zl < -1e-9) throw std::runtime_error("simplex_cond_y_given_z: negative membership");
        s += zl;
    }
    if (std::abs(s - 1.0) > 1e-9) throw std::runtime_error("simplex_cond_y_given_z: z off the simplex");
    std::vector<double> out(m);
    for (int j = 0; j < m; ++j) {
        double a = p.u[j];
        const double* wrow = p.W.row(j);
        for (int l = 0; l < k; ++l) a += wrow[l] * z[l];
        out[j] = sigmoid(a);
    }
    return out;
}

void simplex_z_sweep(const SimplexRbmParams& p, const std::vector<double>& y, std::vector<double>& z, Rng& rng) {
    const int m = p.m(), k = p.k();
    // beta_l depends only on y; compute once per sweep.
    std::vector<double> beta(k - 1);
    for (int l = 0; l < k - 1; ++l) {
        double b = p.v[l] - p.v[k - 1];
        for (int j = 0; j < m; ++j)
            if (y[j] != 0.0) b += (p.W(j, l) - p.W(j, k - 1)) * y[j];
        beta[l] = std::clamp(b, -500.0, 500.0);
    }
    for (int l = 0; l < k - 1; ++l) {
        const double len = z[l] + z[k - 1];  // 1 - s_l
        if (len <= 0.0) {
            z[l] = 0.0;
            z[k - 1] = 0.0;
            continue;
        }
        double a = std::clamp(beta[l] * len, -500.0, 500.0);
        double t = trunc_exp_sample(a, rng.uniform_pos());
        z[l] = len * t;
        z[k - 1] = len - z[l];
    }
}

std::vector<double> sample_z_given_y(const SimplexRbmParams& p, const std::vector<double>& y, int sweeps,
                                     std::uint64_t seed) {
    if (sweeps < 1) throw std::runtime_error("sample_z_given_y: sweeps must be >= 1");
    for (double yj : y)
        if (yj != 0.0 && yj != 1.0) throw std::runtime_error("sample_z_given_y: y must be binary");
    const int k = p.k();
    std::vector<double> z(k, 1.0 / k);
    Rng rng = Rng::stream(seed, "simplex_z");
    for (int s = 0; s < sweeps; ++s) simplex_z_sweep(p, y, z, rng);
    return z;
}

SimplexGibbs::SimplexGibbs(int chains, int m, int k, std::uint64_t seed) {
    if (chains < 1) throw std::runtime_error("SimplexGibbs: chains must be >= 1");
    y_.assign(chains, std::vector<double>(m, 0.0));
    z_.assign(chains, std::vector<double>(k, 1.0 / k));
    rng_.reserve(chains);
    for (int c = 0; c < chains; ++c) rng_.push_back(Rng::stream(seed, "gibbs_simplex", static_cast<std::uint64_t>(c)));
    sum_yz_.assign(chains, Mat());
    sum_z_.assign(chains, {});
    sum_y_.assign(chains, {});
}

void SimplexGibbs::sweep(const SimplexRbmParams& p, int c) {
    Rng& rng = rng_[c];
    const int m = p.m(), k = p.k();
    // y | z
    for (int j = 0; j < m; ++j) {
        double a = p.u[j];
        const double* wrow = p.W.row(j);
        for (int l = 0; l < k; ++l) a += wrow[l] * z_[c][l];
        y_[c][j] = rng.bernoulli(sigmoid(a)) ? 1.0 : 0.0;
    }
    // z | y
    simplex_z_sweep(p, y_[c], z_[c], rng);
}

void SimplexGibbs::burn_in(const SimplexRbmParams& p, int sweeps) {
    const int n_chains = chains();
#pragma omp parallel for schedule(static)
    for (int c = 0; c < n_chains; ++c)
        for (int s = 0; s < sweeps; ++s) sweep(p, c);
}

void SimplexGibbs::step_and_collect(const SimplexRbmParams& p, int thin) {
    const int n_chains = chains();
    const int m = p.m(), k = p.k();
#pragma omp parallel for schedule(static)
    for (int c = 0; c < n_chains; ++c) {
        if (sum_yz_[c].rows != m || sum_yz_[c].cols != k) {
            sum_yz_[c] = Mat(m, k);
            sum_z_[c].assign(k, 0.0);
            sum_y_[c].assign(m, 0.0);
        }
        for (int s = 0; s < thin; ++s) sweep(p, c);
        for (int l = 0; l < k; ++l) sum_z_[c][l] += z_[c][l];
        for (int j = 0; j < m; ++j) {
            if (y_[c][j] == 0.0) continue;
            sum_y_[c][j] += 1.0;
            for (int l = 0; l < k; ++l) sum_yz_[c](j, l) += z_[c][l];
        }
    }
    ++samples_per_chain_;
}

void SimplexGibbs::reset_samples() {
    for (auto& s : sum_yz_) s = Mat();
    samples_per_chain_ = 0;
}

RbmMoments SimplexGibbs::moments() const {
    if (samples_per_chain_ == 0) throw std::runtime_error("SimplexGibbs::moments: no samples collected");
    const int C = chains();
    const int m = static_cast<int>(y_[0].size()), k = static_cast<int>(z_[0].size());
    RbmMoments mo;
    mo.eyz = Mat(m, k);
    mo.ez.assign(k, 0.0);
    mo.ey.assign(m, 0.0);
    mo.eyz_se = Mat(m, k);
    mo.ez_se.assign(k, 0.0);
    mo.ey_se.assign(m, 0.0);
    const double inv_s = 1.0 / static_cast<double>(samples_per_chain_);
    for (int c = 0; c < C; ++c) {
        for (int l = 0; l < k; ++l) mo.ez[l] += sum_z_[c][l] * inv_s;
        for (int j = 0; j < m; ++j) mo.ey[j] += sum_y_[c][j] * inv_s;
        for (size_t t = 0; t < mo.eyz.data.size(); ++t) mo.eyz.data[t] += sum_yz_[c].data[t] * inv_s;
    }
    for (auto& v : mo.ez) v /= C;
    for (auto& v : mo.ey) v /= C;
    for (auto& v : mo.eyz.data) v /= C;
    if (C > 1) {
        for (int c = 0; c < C; ++c) {
            for (int l = 0; l < k; ++l) {
                double d = sum_z_[c][l] * inv_s - mo.ez[l];
                mo.ez_se[l] += d * d;
            }
            for (int j = 0; j < m; ++j) {
                double d = sum_y_[c][j] * inv_s - mo.ey[j];
                mo.ey_se[j] += d * d;
            }
            for (size_t t = 0; t < mo.eyz.data.size(); ++t) {
                double d = sum_yz_[c].data[t] * inv_s - mo.eyz.data[t];
                mo.eyz_se.data[t] += d * d;
            }
        }
        const double norm = 1.0 / (static_cast<double>(C) * (C - 1));
        for (auto& v : mo.ez_se) v = std::sqrt(v * norm);
        for (auto& v : mo.ey_se) v = std::sqrt(v * norm);
        for (auto& v : mo.eyz_se.data) v = std::sqrt(v * norm);
    }
    return mo;
}

RbmMoments simplex_gibbs_moments(const SimplexRbmParams& p, int chains, int thin, int samples, std::uint64_t seed) {
    SimplexGibbs sampler(chains, p.m(), p.k(), seed);
    sampler.burn_in(p, 100);
    for (int s = 0; s < samples; ++s) sampler.step_and_collect(p, thin);
    return sampler.moments();
}

LogOmegaEstimate estimate_log_omega(const SimplexRbmParams& p, long long samples, std::uint64_t seed) {
    if (samples < 1) throw std::runtime_error("estimate_log_omega: samples must be >= 1");
    const int m = p.m(), k = p.k();
    Rng rng = Rng::stream(seed, "log_omega");
    std::vector<double> energies(samples);
    std::vector<double> y(m), z(k), e(k);
    for (long long s = 0; s < samples; ++s) {
        for (int j = 0; j < m; ++j) y[j] = rng.bernoulli(0.5) ? 1.0 : 0.0;
        double tot = 0.0;
        for (int l = 0; l < k; ++l) {
            e[l] = rng.exponential();
            tot += e[l];
        }
        for (int l = 0; l < k; ++l) z[l] = e[l] / tot;
        double energy = 0.0;
        for (int j = 0; j < m; ++j) {
            if (y[j] == 0.0) continue;
            energy += p.u[j];
            const double* wrow = p.W.row(j);
            for (int l = 0; l < k; ++l) energy += wrow[l] * z[l];
        }
        for (int l = 0; l < k; ++l) energy += p.v[l] * z[l];
        energies[s] = energy;
    }
    double lme = log_sum_exp(energies.data(), static_cast<int>(samples)) - std::log(static_cast<double>(samples));
    double lfact = 0.0;
    for (int i = 2; i < k; ++i) lfact += std::log(static_cast<double>(i));
    LogOmegaEstimate est;
    est.value = m * std::log(2.0) - lfact + lme;
    // Delta method: sd(ln mean) ~= sd(sample)/ (mean * sqrt(S)), in log space.
    double var = 0.0;
    for (long long s = 0; s < samples; ++s) {
        double d = std::exp(energies[s] - lme) - 1.0;
        var += d * d;
    }
    var /= std::max<long long>(1, samples - 1);
    est.se = std::sqrt(var / static_cast<double>(samples));
    return est;
}

}  // namespace rbnet
