#include "rbnet/reference.hpp"

#include <algorithm>
#include <cmath>

#include "rbnet/special.hpp"

namespace rbnet::reference {

static bool pair_masked(const std::vector<Edge>& mask, int i, int j) {
    return std::binary_search(mask.begin(), mask.end(), Edge{i, j});
}

BlockPosterior update_block_posteriors_naive(const Mat& q, const AttributedNetwork& net, const BlockPrior& prior,
                                             const std::vector<Edge>& mask) {
    const int n = net.n, k = q.cols;
    BlockPosterior post;
    post.alpha_bar = prior.alpha;
    post.beta_bar = prior.beta;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || pair_masked(mask, i, j)) continue;
            const double a_ij = net.has_edge(i, j) ? 1.0 : 0.0;
            for (int l1 = 0; l1 < k; ++l1)
                for (int l2 = 0; l2 < k; ++l2) {
                    double w = q(i, l1) * q(j, l2);
                    post.alpha_bar(l1, l2) += a_ij * w;
                    post.beta_bar(l1, l2) += (1.0 - a_ij) * w;
                }
        }
    return post;
}

std::vector<double> update_node_posterior_naive(const VariationalStateSbm& state, const AttributedNetwork& net,
                                                int node) {
    const int n = net.n, k = state.q.cols;
    Mat eln_b, eln_1mb;
    expected_log_b(state.block_post, eln_b, eln_1mb);
    std::vector<double> pot(state.rbm.v);
    for (auto& [j, val] : net.y_rows[node])
        for (int l = 0; l < k; ++l) pot[l] += val * state.rbm.W(j, l);
    for (int j = 0; j < n; ++j) {
        if (j == node) continue;
        // Incoming pair (j, node): z_node selects the column.
        if (!pair_masked(state.mask, j, node)) {
            const double a_ji = net.has_edge(j, node) ? 1.0 : 0.0;
            for (int l1 = 0; l1 < k; ++l1)
                for (int l = 0; l < k; ++l)
                    pot[l] += state.q(j, l1) * (a_ji * eln_b(l1, l) + (1.0 - a_ji) * eln_1mb(l1, l));
        }
        // Outgoing pair (node, j): z_node selects the row.
        if (!pair_masked(state.mask, node, j)) {
            const double a_ij = net.has_edge(node, j) ? 1.0 : 0.0;
            for (int l2 = 0; l2 < k; ++l2)
                for (int l = 0; l < k; ++l)
                    pot[l] += state.q(j, l2) * (a_ij * eln_b(l, l2) + (1.0 - a_ij) * eln_1mb(l, l2));
        }
    }
    softmax_inplace(pot.data(), k);
    return pot;
}

double elbo_naive(const VariationalStateSbm& state, const AttributedNetwork& net, const BlockPrior& prior) {
    const int n = net.n, k = state.q.cols;
    Mat eln_b, eln_1mb;
    expected_log_b(state.block_post, eln_b, eln_1mb);

    double total = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            total += (prior.alpha(a, b) - 1.0) * eln_b(a, b) + (prior.beta(a, b) - 1.0) * eln_1mb(a, b) -
                     ln_beta(prior.alpha(a, b), prior.beta(a, b));
            double ab = state.block_post.alpha_bar(a, b), bb = state.block_post.beta_bar(a, b);
            total += ln_beta(ab, bb) - (ab - 1.0) * digamma(ab) - (bb - 1.0) * digamma(bb) +
                     (ab + bb - 2.0) * digamma(ab + bb);
        }

    for (int i = 0; i < n; ++i) {
        for (auto& [j, val] : net.y_rows[i]) {
            total += val * state.rbm.u[j];
            for (int l = 0; l < k; ++l) total += val * state.rbm.W(j, l) * state.q(i, l);
        }
        for (int l = 0; l < k; ++l) {
            total += state.rbm.v[l] * state.q(i, l);
            if (state.q(i, l) > 0.0) total -= state.q(i, l) * std::log(state.q(i, l));
        }
    }
    RbmParams rbm = state.rbm;
    total -= n * log_partition(rbm);

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j || pair_masked(state.mask, i, j)) continue;
            const double a_ij = net.has_edge(i, j) ? 1.0 : 0.0;
            for (int l1 = 0; l1 < k; ++l1)
                for (int l2 = 0; l2 < k; ++l2)
                    total += state.q(i, l1) * state.q(j, l2) *
                             (a_ij * eln_b(l1, l2) + (1.0 - a_ij) * eln_1mb(l1, l2));
        }
    return total;
}

double elbo_mm_naive(const VariationalStateMm& state, const AttributedNetwork& net, const BlockPrior& prior) {
    const int n = state.n, k = state.k;

    Mat mu(n, k);
    std::vector<double> mu_sum(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int l = 0; l < k; ++l) {
            mu(i, l) = std::exp(state.mu_raw(i, l));
            mu_sum[i] += mu(i, l);
        }
    }
    BlockPosterior post = state.block_posterior();

    double total = 0.0;
    // E[ln P(B)]
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            double ab = post.alpha_bar(a, b), bb = post.beta_bar(a, b);
            total += (prior.alpha(a, b) - 1.0) * (digamma(ab) - digamma(ab + bb));
            total += (prior.beta(a, b) - 1.0) * (digamma(bb) - digamma(ab + bb));
            total -= ln_beta(prior.alpha(a, b), prior.beta(a, b));
        }
    // E[ln P(Y, Z)]
    for (int i = 0; i < n; ++i) {
        for (auto& [j, val] : net.y_rows[i]) {
            total += val * state.rbm.u[j];
            for (int l = 0; l < k; ++l) total += val * state.rbm.W(j, l) * mu(i, l) / mu_sum[i];
        }
        for (int l = 0; l < k; ++l) total += state.rbm.v[l] * mu(i, l) / mu_sum[i];
    }
    total -= n * state.log_omega;
    // E[ln P(Psi | Z)] and E[ln P(A | Psi, B)] and multinomial entropies.
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const size_t pidx = VariationalStateMm::pair_index(n, i, j);
            std::vector<double> a(state.phi_out_raw.row(static_cast<int>(pidx)),
                                  state.phi_out_raw.row(static_cast<int>(pidx)) + k);
            std::vector<double> b(state.phi_in_raw.row(static_cast<int>(pidx)),
                                  state.phi_in_raw.row(static_cast<int>(pidx)) + k);
            softmax_inplace(a.data(), k);
            softmax_inplace(b.data(), k);
            const double a_ij = net.has_edge(i, j) ? 1.0 : 0.0;
            for (int l = 0; l < k; ++l) {
                total += a[l] * (digamma(mu(i, l)) - digamma(mu_sum[i]));
                total += b[l] * (digamma(mu(j, l)) - digamma(mu_sum[j]));
                if (a[l] > 0.0) total -= a[l] * std::log(a[l]);
                if (b[l] > 0.0) total -= b[l] * std::log(b[l]);
            }
            for (int l1 = 0; l1 < k; ++l1)
                for (int l2 = 0; l2 < k; ++l2) {
                    double elb = digamma(post.alpha_bar(l1, l2)) -
                                 digamma(post.alpha_bar(l1, l2) + post.beta_bar(l1, l2));
                    double el1mb = digamma(post.beta_bar(l1, l2)) -
                                   digamma(post.alpha_bar(l1, l2) + post.beta_bar(l1, l2));
                    total += a[l1] * b[l2] * (a_ij * elb + (1.0 - a_ij) * el1mb);
                }
        }
    // Dirichlet entropies.
    for (int i = 0; i < n; ++i) {
        double lnbf = -std::lgamma(mu_sum[i]);
        for (int l = 0; l < k; ++l) lnbf += std::lgamma(mu(i, l));
        total += lnbf + (mu_sum[i] - k) * digamma(mu_sum[i]);
        for (int l = 0; l < k; ++l) total -= (mu(i, l) - 1.0) * digamma(mu(i, l));
    }
    // Beta entropies.
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            double ab = post.alpha_bar(a, b), bb = post.beta_bar(a, b);
            total += ln_beta(ab, bb) - (ab - 1.0) * digamma(ab) - (bb - 1.0) * digamma(bb) +
                     (ab + bb - 2.0) * digamma(ab + bb);
        }
    return total;
}

}  // namespace rbnet::reference
