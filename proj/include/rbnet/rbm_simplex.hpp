#pragma once

#include <cstdint>
#include <vector>

#include "rbnet/mat.hpp"
#include "rbnet/rbm_onehot.hpp"
#include "rbnet/rng.hpp"

namespace rbnet {

// Same parameter block as the one-hot RBM, but z ranges over the simplex.
// The partition function is intractable here; moments come from persistent
// Gibbs chains and the log-normalizer from a uniform-proposal estimator.
struct SimplexRbmParams {
    Mat W;                  // m x k
    std::vector<double> u;  // m
    std::vector<double> v;  // k

    int m() const { return W.rows; }
    int k() const { return W.cols; }
};

// P(y_j = 1 | z) = sigmoid(sum_l W_jl z_l + u_j); z must lie on the simplex.
std::vector<double> simplex_cond_y_given_z(const SimplexRbmParams& p, const std::vector<double>& z);

// One full pair-update sweep over l = 1..k-1 in ascending order: resample
// (z_l, z_k) from the truncated exponential conditional with
// beta_l = v_l - v_k + sum_j (W_jl - W_jk) y_j. Exponent arguments are clamped
// at +-500 before exponentiation.
void simplex_z_sweep(const SimplexRbmParams& p, const std::vector<double>& y, std::vector<double>& z, Rng& rng);

// Fresh chain started from the simplex barycenter, `sweeps` pair-update sweeps.
std::vector<double> sample_z_given_y(const SimplexRbmParams& p, const std::vector<double>& y, int sweeps,
                                     std::uint64_t seed);

class SimplexGibbs {
  public:
    SimplexGibbs(int chains, int m, int k, std::uint64_t seed);

    void burn_in(const SimplexRbmParams& p, int sweeps);
    void step_and_collect(const SimplexRbmParams& p, int thin);
    RbmMoments moments() const;
    void reset_samples();
    int chains() const { return static_cast<int>(z_.size()); }

    const std::vector<double>& chain_y(int c) const { return y_[c]; }
    const std::vector<double>& chain_z(int c) const { return z_[c]; }

  private:
    void sweep(const SimplexRbmParams& p, int c);

    std::vector<std::vector<double>> y_, z_;
    std::vector<Rng> rng_;
    std::vector<Mat> sum_yz_;
    std::vector<std::vector<double>> sum_z_, sum_y_;
    long long samples_per_chain_ = 0;
};

// Convenience: fresh chains with burn-in, `samples` collected per chain.
RbmMoments simplex_gibbs_moments(const SimplexRbmParams& p, int chains, int thin, int samples, std::uint64_t seed);

struct LogOmegaEstimate {
    double value = 0.0;  // ln Omega
    double se = 0.0;     // delta-method standard error of ln Omega
};

// ln Omega ~= m ln2 - ln((k-1)!) + ln mean_s exp(energy(y_s, z_s)) with
// (y, z) uniform on {0,1}^m x simplex. Unbiased in Omega, not in ln Omega;
// fine at the m, k this model targets.
LogOmegaEstimate estimate_log_omega(const SimplexRbmParams& p, long long samples, std::uint64_t seed);

}  // namespace rbnet
