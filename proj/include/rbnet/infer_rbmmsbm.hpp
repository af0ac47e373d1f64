#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rbnet/mat.hpp"
#include "rbnet/network.hpp"
#include "rbnet/rbm_simplex.hpp"
#include "rbnet/sbm_block.hpp"

namespace rbnet {

// Mean-field state for the mixed-membership model, kept in unconstrained form:
// Dirichlet parameters mu = exp(mu_raw), interaction-role multinomials
// softmax(phi_*_raw), Beta parameters exp(block_raw_*). Self-pairs (i,i) are
// excluded; ordered pair (i,j) lives at row pair_index(n,i,j).
struct VariationalStateMm {
    int n = 0, k = 0;
    Mat mu_raw;        // n x k
    Mat phi_out_raw;   // n(n-1) x k, role of the source node i in (i,j)
    Mat phi_in_raw;    // n(n-1) x k, role of the target node j in (i,j)
    Mat block_raw_a;   // k x k, ln(alpha_bar)
    Mat block_raw_b;   // k x k, ln(beta_bar)
    SimplexRbmParams rbm;
    std::vector<double> elbo_trace;
    double log_omega = 0.0;
    double log_omega_se = 0.0;

    static size_t pair_index(int n, int i, int j) {
        return static_cast<size_t>(i) * (n - 1) + (j < i ? j : j - 1);
    }
    Mat memberships() const;            // E[z_i] = mu / rowsum(mu)
    BlockPosterior block_posterior() const;
};

struct MmFitOptions {
    int k = 3;
    int tau = 1000;
    int xi = 1;
    double epsilon = -1.0;    // M-step rate; -1 means 1/n
    double e_epsilon = -1.0;  // E-step rate; -1 means 1/n
    int chains = 100;
    int thin = 10;
    int burnin = 100;
    std::uint64_t seed = 0;
    int max_n = 3000;              // memory guard for the O(n^2 k) factors
    long long omega_samples = 20000;
    int elbo_every = 1;
    double mu_init_noise = 0.01;   // uniform noise on mu_raw at startup
    double phi_init_noise = 0.0;   // uniform noise on the interaction logits
    double phi_damping = 0.2;      // damping of the role coordinate updates in fit_mm
    int moment_samples = 10;       // thinned samples per chain per M-step
    // Optionally seed the memberships and RBM parameters from a short
    // pure-model CAVI fit instead of the symmetric Dirichlet start.
    bool warm_start = false;
    int warm_start_tau = 300;
    double warm_start_scale = 10.0;  // mu = 1 + scale * q_prefit
    std::optional<BlockPrior> prior;  // defaults to alpha=1, beta=1/10
};

struct MmGradients {
    Mat d_mu_raw;
    Mat d_phi_out;
    Mat d_phi_in;
    Mat d_block_a;
    Mat d_block_b;
};

VariationalStateMm init_state_mm(const AttributedNetwork& net, const MmFitOptions& options);

// Full ELBO of the mean-field family, including the -n * log_omega constant
// carried on the state (refreshed after M-steps; zero gradient in the E-step).
double elbo_mm(const VariationalStateMm& state, const AttributedNetwork& net, const BlockPrior& prior);

// Analytic gradients of elbo_mm w.r.t. every unconstrained parameter.
MmGradients mm_elbo_gradients(const VariationalStateMm& state, const AttributedNetwork& net, const BlockPrior& prior);

// xi gradient-ascent steps on the variational parameters (theta fixed).
void e_step(VariationalStateMm& state, const AttributedNetwork& net, const BlockPrior& prior, int xi, double epsilon);

// xi ascent steps on W, u, v with moments from persistent Gibbs chains
// (moment_samples collections of one thinned sample per chain each step).
// Monte-Carlo noise along the exactly-flat direction (W_j. += delta,
// u_j -= delta) is projected out of the update.
void m_step_mm(VariationalStateMm& state, const AttributedNetwork& net, int xi, double epsilon, SimplexGibbs& sampler,
               int thin, int moment_samples = 10);

struct MmFitReport {
    std::vector<double> elbo_trace;
    std::vector<double> iter_seconds;
    Mat memberships;
    Mat block_mean;
    std::vector<int> labels;  // argmax of E[z_i]
    int iterations = 0;
};

std::pair<VariationalStateMm, MmFitReport> fit_mm(const AttributedNetwork& net, const MmFitOptions& options);

struct SelectKRow {
    int k = 0;
    double elbo_with_omega = 0.0;
    double elbo_without_omega = 0.0;
    double log_omega = 0.0;
    double log_omega_se = 0.0;
};

struct SelectKResult {
    int chosen_k = 0;
    std::vector<SelectKRow> table;
};

SelectKResult select_k(const AttributedNetwork& net, const std::vector<int>& k_range, const MmFitOptions& options);

}  // namespace rbnet
