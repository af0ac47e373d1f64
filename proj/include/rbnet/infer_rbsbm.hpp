#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rbnet/mat.hpp"
#include "rbnet/network.hpp"
#include "rbnet/rbm_onehot.hpp"
#include "rbnet/sbm_block.hpp"

namespace rbnet {

enum class GradientMode { exact, gibbs };

struct FitOptions {
    int k = 2;
    int tau = 1000;        // EM iterations
    int batch = -1;        // node updates per E-step; -1 means min(n, 256)
    int xi = 1;            // gradient-ascent steps per M-step
    double epsilon = -1.0; // learning rate; -1 means 1/n
    GradientMode gradient_mode = GradientMode::gibbs;
    int chains = 100;
    int thin = 10;
    int burnin = 100;
    std::uint64_t seed = 0;
    std::vector<Edge> mask;  // held-out ordered pairs, excluded from the likelihood

    bool anneal = true;
    double lambda0 = 0.3;  // annealing exponent ramps linearly to 1 over tau

    bool early_stop = false;  // stop when ELBO gain < 1e-6 |ELBO| over 20 iterations
    int elbo_every = 1;       // 0 disables the ELBO trace

    // Beta prior on the block matrix; defaults to the assortative
    // alpha = 1, beta = 1 (diag) / 10 (off-diag) choice.
    std::optional<BlockPrior> prior;

    bool freeze_rbm = false;                  // skip the M-step entirely
    std::optional<RbmParams> initial_params;  // overrides the data-driven init
};

struct VariationalStateSbm {
    Mat q;  // n x k, rows on the simplex
    BlockPosterior block_post;
    RbmParams rbm;
    std::vector<double> elbo_trace;
    double lambda = 1.0;
    std::vector<Edge> mask;                      // sorted
    std::vector<std::vector<int>> mask_out;      // per-node masked partners
    std::vector<std::vector<int>> mask_in;

    void set_mask(int n, std::vector<Edge> sorted_mask);
};

struct FitReport {
    std::vector<double> elbo_trace;
    std::vector<double> nmi_trace;      // empty without ground-truth labels
    std::vector<double> iter_seconds;   // E+M wall time per iteration
    std::vector<int> labels;            // argmax memberships, lowest index wins ties
    Mat block_mean;
    int iterations = 0;
};

// Closed-form Beta updates over all community pairs, O(k^2 (n + |E|)) via the
// non-edge reformulation; masked pairs contribute to neither sum.
BlockPosterior update_block_posteriors(const VariationalStateSbm& state, const AttributedNetwork& net,
                                       const BlockPrior& prior);

// One CAVI coordinate update of q_i (row-stochastic result). Digamma tables
// and column sums are recomputed internally; fit() uses the cached path.
std::vector<double> update_node_posterior(const VariationalStateSbm& state, const AttributedNetwork& net, int node);

// Power squashing that keeps every community alive early on: fixed points at
// 0, 1/2 and 1, elevates below 1/2, dampens above, then renormalizes.
std::vector<double> anneal(const std::vector<double>& q_row, double lambda);

// xi gradient-ascent steps on the expected log joint w.r.t. the RBM
// parameters; expectations exact or from persistent Gibbs chains.
RbmParams m_step(const VariationalStateSbm& state, const AttributedNetwork& net, const FitOptions& options,
                 OneHotGibbs* sampler = nullptr);

double elbo(const VariationalStateSbm& state, const AttributedNetwork& net, const BlockPrior& prior);

std::pair<VariationalStateSbm, FitReport> fit(const AttributedNetwork& net, const FitOptions& options);

struct LinkPrediction {
    std::vector<Edge> pairs;
    std::vector<double> scores;
    std::vector<int> is_positive;
    double auc = 0.0;
};

// score(i,j) = q_i^T B_hat q_j over the held-out pairs of the split.
LinkPrediction predict_links(const VariationalStateSbm& state, const LinkSplit& split);

BlockPrior default_data_prior(int k);

// Gradient of the expected log joint w.r.t. theta, and the objective itself
// (exposed for the finite-difference checks).
struct RbmGradient {
    Mat dW;
    std::vector<double> du, dv;
};
RbmGradient m_step_gradient(const Mat& q, const AttributedNetwork& net, const RbmParams& rbm,
                            const RbmMoments& moments);
double expected_log_joint_rbm_part(const Mat& q, const AttributedNetwork& net, const RbmParams& rbm);

}  // namespace rbnet
