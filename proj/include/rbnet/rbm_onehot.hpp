#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rbnet/mat.hpp"
#include "rbnet/network.hpp"
#include "rbnet/rng.hpp"

namespace rbnet {

// Joint energy model over covariate vectors y and one-hot community vectors z:
// P(y,z) proportional to exp(y^T W z + y^T u + z^T v). The one-hot restriction
// makes the partition function and all moments exactly computable in binary
// mode; continuous mode replaces the Bernoulli covariate factor with a
// truncated exponential density on [0,1].
struct RbmParams {
    Mat W;                  // m x k
    std::vector<double> u;  // m
    std::vector<double> v;  // k
    CovariateMode mode = CovariateMode::binary;

    int m() const { return W.rows; }
    int k() const { return W.cols; }
};

double log_partition(const RbmParams& p);

// Binary mode: success probabilities sigmoid(W_jl + u_j).
// Continuous mode: rate parameters a_j = W_jl + u_j of the density
// a e^{a y} / (e^a - 1) on [0,1].
std::vector<double> cond_y_given_z(const RbmParams& p, int community);

// P(z_l = 1 | y) via max-shifted exponentials; y given as sparse (index,value).
std::vector<double> cond_z_given_y(const RbmParams& p, const std::vector<std::pair<int, double>>& y);
std::vector<double> cond_z_given_y_dense(const RbmParams& p, const std::vector<double>& y);

struct RbmMoments {
    Mat eyz;                  // m x k
    std::vector<double> ez;   // k
    std::vector<double> ey;   // m
    Mat eyz_se;               // Monte-Carlo standard errors; empty for exact moments
    std::vector<double> ez_se;
    std::vector<double> ey_se;
};

// Closed-form moments; binary mode only.
RbmMoments exact_moments(const RbmParams& p);

// Persistent Gibbs chains alternating z|y and y|z. Chains keep their state
// across calls so they can serve as PCD chains inside the M-step.
class OneHotGibbs {
  public:
    OneHotGibbs(int chains, int m, std::uint64_t seed);

    void burn_in(const RbmParams& p, int sweeps);
    // Advance every chain `thin` sweeps, then record one sample per chain.
    void step_and_collect(const RbmParams& p, int thin);
    // Moments of all samples collected since the last reset; per-chain means
    // feed the standard errors.
    RbmMoments moments(const RbmParams& p) const;
    void reset_samples();
    int chains() const { return static_cast<int>(z_.size()); }

    const std::vector<double>& chain_y(int c) const { return y_[c]; }
    int chain_z(int c) const { return z_[c]; }

  private:
    void sweep(const RbmParams& p, int c);

    std::vector<std::vector<double>> y_;  // per chain, length m
    std::vector<int> z_;                  // per chain, community index
    std::vector<Rng> rng_;
    // Accumulated per-chain sums of y_j z_l, z_l, y_j.
    std::vector<Mat> sum_yz_;
    std::vector<std::vector<double>> sum_z_;
    std::vector<std::vector<double>> sum_y_;
    long long samples_per_chain_ = 0;
};

struct YzSample {
    std::vector<double> y;
    int z;
};

// Convenience wrapper: fresh chains, `steps` samples per chain after thinning.
std::vector<YzSample> gibbs_sample(const RbmParams& p, int chains, int thin, int steps, std::uint64_t seed);

// Inference-time initialization: small symmetric-breaking noise on W, u set to
// the logit of the clamped covariate column means, v zero.
RbmParams init_rbm_params(const AttributedNetwork& net, int k, Rng& rng, CovariateMode mode);

// Versioned text bundle; `kind` is "onehot" or "simplex".
void save_rbm_params(const std::string& path, const RbmParams& p, const std::string& kind);
RbmParams load_rbm_params(const std::string& path, std::string* kind_out = nullptr);

}  // namespace rbnet
