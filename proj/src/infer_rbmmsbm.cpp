#include "rbnet/infer_rbmmsbm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rbnet/infer_rbsbm.hpp"
#include "rbnet/special.hpp"

namespace rbnet {

Mat VariationalStateMm::memberships() const {
    Mat q(n, k);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int l = 0; l < k; ++l) {
            q(i, l) = std::exp(mu_raw(i, l));
            s += q(i, l);
        }
        for (int l = 0; l < k; ++l) q(i, l) /= s;
    }
    return q;
}

BlockPosterior VariationalStateMm::block_posterior() const {
    BlockPosterior post;
    post.alpha_bar = Mat(k, k);
    post.beta_bar = Mat(k, k);
    for (size_t t = 0; t < block_raw_a.data.size(); ++t) {
        post.alpha_bar.data[t] = std::exp(block_raw_a.data[t]);
        post.beta_bar.data[t] = std::exp(block_raw_b.data[t]);
    }
    return post;
}

namespace {

// Everything the ELBO and its gradients share, derived once per evaluation.
struct MmDerived {
    Mat mu;            // n x k
    std::vector<double> mu_sum;   // n
    Mat qbar;          // n x k
    Mat dig_mu;        // n x k: psi(mu_il)
    std::vector<double> dig_sum;  // psi(sum_l mu_il)
    Mat a_prob, b_prob;           // n(n-1) x k
    Mat alpha_bar, beta_bar, eln_b, eln_1mb;  // k x k
};

MmDerived derive(const VariationalStateMm& state) {
    const int n = state.n, k = state.k;
    MmDerived d;
    d.mu = Mat(n, k);
    d.qbar = Mat(n, k);
    d.dig_mu = Mat(n, k);
    d.mu_sum.assign(n, 0.0);
    d.dig_sum.assign(n, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int l = 0; l < k; ++l) {
            double m = std::exp(state.mu_raw(i, l));
            d.mu(i, l) = m;
            s += m;
        }
        d.mu_sum[i] = s;
        d.dig_sum[i] = digamma(s);
        for (int l = 0; l < k; ++l) {
            d.qbar(i, l) = d.mu(i, l) / s;
            d.dig_mu(i, l) = digamma(d.mu(i, l));
        }
    }
    const size_t pairs = state.phi_out_raw.rows;
    d.a_prob = Mat(static_cast<int>(pairs), k);
    d.b_prob = Mat(static_cast<int>(pairs), k);
#pragma omp parallel for schedule(static)
    for (long long pidx = 0; pidx < static_cast<long long>(pairs); ++pidx) {
        const double* pa = state.phi_out_raw.row(static_cast<int>(pidx));
        const double* pb = state.phi_in_raw.row(static_cast<int>(pidx));
        double* oa = d.a_prob.row(static_cast<int>(pidx));
        double* ob = d.b_prob.row(static_cast<int>(pidx));
        for (int l = 0; l < k; ++l) {
            oa[l] = pa[l];
            ob[l] = pb[l];
        }
        softmax_inplace(oa, k);
        softmax_inplace(ob, k);
    }
    BlockPosterior post = state.block_posterior();
    d.alpha_bar = post.alpha_bar;
    d.beta_bar = post.beta_bar;
    expected_log_b(post, d.eln_b, d.eln_1mb);
    return d;
}

// Covariate potentials c_il = sum_j Y_ij W_jl + v_l.
Mat covariate_potentials(const VariationalStateMm& state, const AttributedNetwork& net) {
    const int n = state.n, k = state.k;
    Mat c(n, k);
    for (int i = 0; i < n; ++i) {
        double* row = c.row(i);
        for (int l = 0; l < k; ++l) row[l] = state.rbm.v[l];
        for (auto& [j, val] : net.y_rows[i]) {
            const double* wrow = state.rbm.W.row(j);
            for (int l = 0; l < k; ++l) row[l] += val * wrow[l];
        }
    }
    return c;
}

constexpr int kChunks = 64;

}  // namespace

VariationalStateMm init_state_mm(const AttributedNetwork& net, const MmFitOptions& options) {
    const int n = net.n, k = options.k;
    if (k < 2) throw std::runtime_error("fit_mm: k must be >= 2");
    if (n > options.max_n)
        throw std::runtime_error("fit_mm: n = " + std::to_string(n) + " exceeds the configured cap " +
                                 std::to_string(options.max_n) +
                                 " (the interaction factors need O(n^2 k) memory; raise --max-n to override)");
    VariationalStateMm st;
    st.n = n;
    st.k = k;
    Rng rng = Rng::stream(options.seed, "init");
    st.mu_raw = Mat(n, k);
    for (auto& x : st.mu_raw.data) x = (rng.uniform() * 2.0 - 1.0) * options.mu_init_noise;
    st.phi_out_raw = Mat(n * (n - 1), k);
    st.phi_in_raw = Mat(n * (n - 1), k);
    if (options.phi_init_noise > 0.0) {
        for (auto& x : st.phi_out_raw.data) x = (rng.uniform() * 2.0 - 1.0) * options.phi_init_noise;
        for (auto& x : st.phi_in_raw.data) x = (rng.uniform() * 2.0 - 1.0) * options.phi_init_noise;
    }
    st.block_raw_a = Mat(k, k);  // alpha_bar = beta_bar = 1
    st.block_raw_b = Mat(k, k);
    RbmParams p = init_rbm_params(net, k, rng, CovariateMode::binary);
    st.rbm.W = std::move(p.W);
    st.rbm.u = std::move(p.u);
    st.rbm.v = std::move(p.v);
    return st;
}

double elbo_mm(const VariationalStateMm& state, const AttributedNetwork& net, const BlockPrior& prior) {
    const int n = state.n, k = state.k;
    MmDerived d = derive(state);

    // Beta prior cross-entropy plus Beta entropy.
    double term_b = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            double al = prior.alpha(a, b), be = prior.beta(a, b);
            term_b += (al - 1.0) * d.eln_b(a, b) + (be - 1.0) * d.eln_1mb(a, b) - ln_beta(al, be);
            double ab = d.alpha_bar(a, b), bb = d.beta_bar(a, b);
            term_b += ln_beta(ab, bb) - (ab - 1.0) * digamma(ab) - (bb - 1.0) * digamma(bb) +
                      (ab + bb - 2.0) * digamma(ab + bb);
        }

    // Covariate block plus Dirichlet entropy.
    Mat c = covariate_potentials(state, net);
    double term_yz = -static_cast<double>(n) * state.log_omega;
    for (int i = 0; i < n; ++i) {
        for (auto& [j, val] : net.y_rows[i]) term_yz += val * state.rbm.u[j];
        const double* crow = c.row(i);
        for (int l = 0; l < k; ++l) term_yz += crow[l] * d.qbar(i, l);
    }
    double term_ent_dir = 0.0;
    for (int i = 0; i < n; ++i) {
        double lnbf = -std::lgamma(d.mu_sum[i]);
        double corr = (d.mu_sum[i] - k) * d.dig_sum[i];
        for (int l = 0; l < k; ++l) {
            lnbf += std::lgamma(d.mu(i, l));
            corr -= (d.mu(i, l) - 1.0) * d.dig_mu(i, l);
        }
        term_ent_dir += lnbf + corr;
    }

    // Pair terms: role priors, adjacency, and multinomial entropies.
    const long long pairs = state.phi_out_raw.rows;
    std::vector<double> partial(kChunks, 0.0);
#pragma omp parallel for schedule(static)
    for (int chunk = 0; chunk < kChunks; ++chunk) {
        long long lo = pairs * chunk / kChunks, hi = pairs * (chunk + 1) / kChunks;
        double acc = 0.0;
        for (long long pidx = lo; pidx < hi; ++pidx) {
            const int i = static_cast<int>(pidx / (n - 1));
            int j = static_cast<int>(pidx % (n - 1));
            if (j >= i) ++j;
            const double* ar = d.a_prob.row(static_cast<int>(pidx));
            const double* br = d.b_prob.row(static_cast<int>(pidx));
            const bool edge = net.has_edge(i, j);
            for (int l = 0; l < k; ++l) {
                acc += ar[l] * (d.dig_mu(i, l) - d.dig_sum[i]);
                acc += br[l] * (d.dig_mu(j, l) - d.dig_sum[j]);
                if (ar[l] > 0.0) acc -= ar[l] * std::log(ar[l]);
                if (br[l] > 0.0) acc -= br[l] * std::log(br[l]);
            }
            const Mat& tbl = edge ? d.eln_b : d.eln_1mb;
            for (int l1 = 0; l1 < k; ++l1) {
                if (ar[l1] == 0.0) continue;
                const double* trow = tbl.row(l1);
                double s = 0.0;
                for (int l2 = 0; l2 < k; ++l2) s += br[l2] * trow[l2];
                acc += ar[l1] * s;
            }
        }
        partial[chunk] = acc;
    }
    double term_pairs = 0.0;
    for (double p : partial) term_pairs += p;

    return term_b + term_yz + term_ent_dir + term_pairs;
}

MmGradients mm_elbo_gradients(const VariationalStateMm& state, const AttributedNetwork& net,
                              const BlockPrior& prior) {
    const int n = state.n, k = state.k;
    MmDerived d = derive(state);
    Mat c = covariate_potentials(state, net);

    MmGradients g;
    g.d_mu_raw = Mat(n, k);
    g.d_phi_out = Mat(n * (n - 1), k);
    g.d_phi_in = Mat(n * (n - 1), k);
    g.d_block_a = Mat(k, k);
    g.d_block_b = Mat(k, k);

    const long long pairs = state.phi_out_raw.rows;

    // Interaction-role gradients, plus chunked accumulation of the pair-role
    // statistics E_ab (edges) and T_ab (all pairs) for the block gradient.
    std::vector<Mat> edge_partial(kChunks, Mat(k, k)), tot_partial(kChunks, Mat(k, k));
#pragma omp parallel for schedule(static)
    for (int chunk = 0; chunk < kChunks; ++chunk) {
        long long lo = pairs * chunk / kChunks, hi = pairs * (chunk + 1) / kChunks;
        Mat& e_acc = edge_partial[chunk];
        Mat& t_acc = tot_partial[chunk];
        std::vector<double> fa(k), fb(k);
        for (long long pidx = lo; pidx < hi; ++pidx) {
            const int i = static_cast<int>(pidx / (n - 1));
            int j = static_cast<int>(pidx % (n - 1));
            if (j >= i) ++j;
            const double* ar = d.a_prob.row(static_cast<int>(pidx));
            const double* br = d.b_prob.row(static_cast<int>(pidx));
            const bool edge = net.has_edge(i, j);
            const Mat& tbl = edge ? d.eln_b : d.eln_1mb;
            for (int l1 = 0; l1 < k; ++l1) {
                const double* trow = tbl.row(l1);
                double s = 0.0;
                for (int l2 = 0; l2 < k; ++l2) s += br[l2] * trow[l2];
                fa[l1] = (d.dig_mu(i, l1) - d.dig_sum[i]) + s - std::log(std::max(ar[l1], 1e-300)) - 1.0;
            }
            for (int l2 = 0; l2 < k; ++l2) {
                double s = 0.0;
                for (int l1 = 0; l1 < k; ++l1) s += ar[l1] * tbl(l1, l2);
                fb[l2] = (d.dig_mu(j, l2) - d.dig_sum[j]) + s - std::log(std::max(br[l2], 1e-300)) - 1.0;
            }
            double fa_mean = 0.0, fb_mean = 0.0;
            for (int l = 0; l < k; ++l) {
                fa_mean += ar[l] * fa[l];
                fb_mean += br[l] * fb[l];
            }
            double* ga = g.d_phi_out.row(static_cast<int>(pidx));
            double* gb = g.d_phi_in.row(static_cast<int>(pidx));
            for (int l = 0; l < k; ++l) {
                ga[l] = ar[l] * (fa[l] - fa_mean);
                gb[l] = br[l] * (fb[l] - fb_mean);
            }
            for (int l1 = 0; l1 < k; ++l1) {
                if (ar[l1] == 0.0) continue;
                double* erow = e_acc.row(l1);
                double* trow2 = t_acc.row(l1);
                for (int l2 = 0; l2 < k; ++l2) {
                    double w = ar[l1] * br[l2];
                    trow2[l2] += w;
                    if (edge) erow[l2] += w;
                }
            }
        }
    }
    Mat e_ab(k, k), t_ab(k, k);
    for (int chunk = 0; chunk < kChunks; ++chunk)
        for (size_t t = 0; t < e_ab.data.size(); ++t) {
            e_ab.data[t] += edge_partial[chunk].data[t];
            t_ab.data[t] += tot_partial[chunk].data[t];
        }

    // Block gradients through the exp reparameterization.
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            double ab = d.alpha_bar(a, b), bb = d.beta_bar(a, b);
            double e = e_ab(a, b), ne = t_ab(a, b) - e;
            double tri_ab = trigamma(ab + bb);
            double common = (prior.alpha(a, b) + prior.beta(a, b) + e + ne - ab - bb) * tri_ab;
            g.d_block_a(a, b) = ab * ((prior.alpha(a, b) + e - ab) * trigamma(ab) - common);
            g.d_block_b(a, b) = bb * ((prior.beta(a, b) + ne - bb) * trigamma(bb) - common);
        }

    // Role-count totals D_il = sum over interactions of node i's role weights.
    Mat role_counts(n, k);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        double* drow = role_counts.row(i);
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double* ar = d.a_prob.row(static_cast<int>(VariationalStateMm::pair_index(n, i, j)));
            const double* br = d.b_prob.row(static_cast<int>(VariationalStateMm::pair_index(n, j, i)));
            for (int l = 0; l < k; ++l) drow[l] += ar[l] + br[l];
        }
    }

#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const double* crow = c.row(i);
        const double* drow = role_counts.row(i);
        double cbar = 0.0, dtot = 0.0;
        for (int l = 0; l < k; ++l) {
            cbar += crow[l] * d.qbar(i, l);
            dtot += drow[l];
        }
        const double tri_sum = trigamma(d.mu_sum[i]);
        for (int l = 0; l < k; ++l) {
            double mu = d.mu(i, l);
            double grad_mu = (crow[l] - cbar) / d.mu_sum[i] + drow[l] * trigamma(mu) - dtot * tri_sum +
                             (d.mu_sum[i] - k) * tri_sum - (mu - 1.0) * trigamma(mu);
            g.d_mu_raw(i, l) = mu * grad_mu;
        }
    }
    return g;
}

void e_step(VariationalStateMm& state, const AttributedNetwork& net, const BlockPrior& prior, int xi,
            double epsilon) {
    // The Beta pseudo-count gradients scale with n^2 under the exp
    // reparameterization, so a raw epsilon * grad step can overshoot into an
    // exp() overflow. Per-coordinate steps are capped at 1 in log space; the
    // cap never binds at the rates the ascent-property tests use.
    const double max_step = 1.0;
    for (int s = 0; s < xi; ++s) {
        MmGradients g = mm_elbo_gradients(state, net, prior);
        auto apply = [&](Mat& x, const Mat& dx) {
            for (size_t t = 0; t < x.data.size(); ++t) {
                x.data[t] += std::clamp(epsilon * dx.data[t], -max_step, max_step);
                if (!std::isfinite(x.data[t]))
                    throw std::runtime_error("e_step: non-finite variational parameter (try a smaller rate)");
            }
        };
        apply(state.mu_raw, g.d_mu_raw);
        apply(state.phi_out_raw, g.d_phi_out);
        apply(state.phi_in_raw, g.d_phi_in);
        apply(state.block_raw_a, g.d_block_a);
        apply(state.block_raw_b, g.d_block_b);
    }
}

void m_step_mm(VariationalStateMm& state, const AttributedNetwork& net, int xi, double epsilon, SimplexGibbs& sampler,
               int thin, int moment_samples) {
    const int n = state.n, k = state.k, m = net.m;
    Mat qbar = state.memberships();
    // Data statistics with q_i(l) = mu_il / sum mu.
    Mat sw(m, k);
    std::vector<double> su(m, 0.0), sv(k, 0.0);
    for (int i = 0; i < n; ++i) {
        const double* qi = qbar.row(i);
        for (auto& [j, val] : net.y_rows[i]) {
            double* swr = sw.row(j);
            for (int l = 0; l < k; ++l) swr[l] += val * qi[l];
            su[j] += val;
        }
        for (int l = 0; l < k; ++l) sv[l] += qi[l];
    }
    for (int s = 0; s < xi; ++s) {
        sampler.reset_samples();
        for (int c = 0; c < std::max(1, moment_samples); ++c) sampler.step_and_collect(state.rbm, thin);
        RbmMoments mo = sampler.moments();
        for (int j = 0; j < m; ++j) {
            double gu = su[j] - n * mo.ey[j];
            // Because sum_l z_l = 1, the direction (W_j. += delta, u_j -= delta)
            // leaves the model invariant and the true gradient along it is
            // exactly zero; removing the estimated component stops Monte-Carlo
            // noise from random-walking the parameters along that flat orbit.
            double gauge = -gu;
            for (int l = 0; l < k; ++l) gauge += sw(j, l) - n * mo.eyz(j, l);
            gauge /= k + 1;
            for (int l = 0; l < k; ++l) {
                double gw = sw(j, l) - n * mo.eyz(j, l) - gauge;
                state.rbm.W(j, l) += epsilon * gw;
                if (!std::isfinite(state.rbm.W(j, l))) throw std::runtime_error("m_step_mm: non-finite W");
            }
            state.rbm.u[j] += epsilon * (gu + gauge);
            if (!std::isfinite(state.rbm.u[j])) throw std::runtime_error("m_step_mm: non-finite u");
        }
        for (int l = 0; l < k; ++l) {
            state.rbm.v[l] += epsilon * (sv[l] - n * mo.ez[l]);
            if (!std::isfinite(state.rbm.v[l])) throw std::runtime_error("m_step_mm: non-finite v");
        }
    }
}

// Production E-step used by fit_mm: the multinomial and Beta factors have
// closed-form coordinate maximizers of the same ELBO the gradients ascend
// (softmax of their potentials; prior plus expected counts), so those jump —
// damped in logit space — while the Dirichlet parameters, which have no
// closed form, take clamped gradient steps. Plain simultaneous gradient
// ascent stalls on the fully symmetric saddle (uniform memberships, flat
// block matrix) and never differentiates communities.
static void fit_e_step(VariationalStateMm& state, const AttributedNetwork& net, const BlockPrior& prior, int xi,
                       double epsilon, double rho) {
    const int n = state.n, k = state.k;
    for (int s = 0; s < xi; ++s) {
        MmDerived d = derive(state);

        // Beta factors: exact coordinate update from the current role sums.
        std::vector<Mat> edge_partial(kChunks, Mat(k, k)), tot_partial(kChunks, Mat(k, k));
        const long long pairs = state.phi_out_raw.rows;
#pragma omp parallel for schedule(static)
        for (int chunk = 0; chunk < kChunks; ++chunk) {
            long long lo = pairs * chunk / kChunks, hi = pairs * (chunk + 1) / kChunks;
            Mat& e_acc = edge_partial[chunk];
            Mat& t_acc = tot_partial[chunk];
            for (long long pidx = lo; pidx < hi; ++pidx) {
                const int i = static_cast<int>(pidx / (n - 1));
                int j = static_cast<int>(pidx % (n - 1));
                if (j >= i) ++j;
                const double* ar = d.a_prob.row(static_cast<int>(pidx));
                const double* br = d.b_prob.row(static_cast<int>(pidx));
                const bool edge = net.has_edge(i, j);
                for (int l1 = 0; l1 < k; ++l1) {
                    double* trow = t_acc.row(l1);
                    double* erow = e_acc.row(l1);
                    for (int l2 = 0; l2 < k; ++l2) {
                        double w = ar[l1] * br[l2];
                        trow[l2] += w;
                        if (edge) erow[l2] += w;
                    }
                }
            }
        }
        BlockPosterior post;
        post.alpha_bar = Mat(k, k);
        post.beta_bar = Mat(k, k);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) {
                double e = 0.0, tt = 0.0;
                for (int chunk = 0; chunk < kChunks; ++chunk) {
                    e += edge_partial[chunk](a, b);
                    tt += tot_partial[chunk](a, b);
                }
                post.alpha_bar(a, b) = prior.alpha(a, b) + e;
                post.beta_bar(a, b) = prior.beta(a, b) + (tt - e);
                state.block_raw_a(a, b) = std::log(post.alpha_bar(a, b));
                state.block_raw_b(a, b) = std::log(post.beta_bar(a, b));
            }
        Mat eln_b, eln_1mb;
        expected_log_b(post, eln_b, eln_1mb);

        // Interaction roles: damped coordinate update toward softmax(g + h).
#pragma omp parallel for schedule(static)
        for (long long pidx = 0; pidx < pairs; ++pidx) {
            const int i = static_cast<int>(pidx / (n - 1));
            int j = static_cast<int>(pidx % (n - 1));
            if (j >= i) ++j;
            const bool edge = net.has_edge(i, j);
            const Mat& tbl = edge ? eln_b : eln_1mb;
            const double* br = d.b_prob.row(static_cast<int>(pidx));
            double* out_logit = state.phi_out_raw.row(static_cast<int>(pidx));
            for (int l1 = 0; l1 < k; ++l1) {
                double h = 0.0;
                const double* trow = tbl.row(l1);
                for (int l2 = 0; l2 < k; ++l2) h += br[l2] * trow[l2];
                out_logit[l1] = (1.0 - rho) * out_logit[l1] + rho * (d.dig_mu(i, l1) - d.dig_sum[i] + h);
            }
            std::vector<double> a(out_logit, out_logit + k);
            softmax_inplace(a.data(), k);
            double* in_logit = state.phi_in_raw.row(static_cast<int>(pidx));
            for (int l2 = 0; l2 < k; ++l2) {
                double h = 0.0;
                for (int l1 = 0; l1 < k; ++l1) h += a[l1] * tbl(l1, l2);
                in_logit[l2] = (1.0 - rho) * in_logit[l2] + rho * (d.dig_mu(j, l2) - d.dig_sum[j] + h);
            }
        }

        // Dirichlet parameters: clamped gradient step with fresh role counts.
        Mat role_counts(n, k);
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            double* drow = role_counts.row(i);
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                std::vector<double> a(state.phi_out_raw.row(VariationalStateMm::pair_index(n, i, j)),
                                      state.phi_out_raw.row(VariationalStateMm::pair_index(n, i, j)) + k);
                std::vector<double> b(state.phi_in_raw.row(VariationalStateMm::pair_index(n, j, i)),
                                      state.phi_in_raw.row(VariationalStateMm::pair_index(n, j, i)) + k);
                softmax_inplace(a.data(), k);
                softmax_inplace(b.data(), k);
                for (int l = 0; l < k; ++l) drow[l] += a[l] + b[l];
            }
        }
        Mat c = covariate_potentials(state, net);
#pragma omp parallel for schedule(static)
        for (int i = 0; i < n; ++i) {
            const double* crow = c.row(i);
            const double* drow = role_counts.row(i);
            double cbar = 0.0, dtot = 0.0, msum = 0.0;
            std::vector<double> mu(k);
            for (int l = 0; l < k; ++l) {
                mu[l] = std::exp(state.mu_raw(i, l));
                msum += mu[l];
            }
            for (int l = 0; l < k; ++l) {
                cbar += crow[l] * mu[l] / msum;
                dtot += drow[l];
            }
            const double tri_sum = trigamma(msum);
            for (int l = 0; l < k; ++l) {
                double grad = (crow[l] - cbar) / msum + drow[l] * trigamma(mu[l]) - dtot * tri_sum +
                              (msum - k) * tri_sum - (mu[l] - 1.0) * trigamma(mu[l]);
                state.mu_raw(i, l) += std::clamp(epsilon * mu[l] * grad, -1.0, 1.0);
                if (!std::isfinite(state.mu_raw(i, l)))
                    throw std::runtime_error("fit_mm: non-finite Dirichlet parameter");
            }
        }
    }
}

std::pair<VariationalStateMm, MmFitReport> fit_mm(const AttributedNetwork& net, const MmFitOptions& options) {
    const int n = net.n;
    VariationalStateMm state = init_state_mm(net, options);
    const BlockPrior prior = options.prior ? *options.prior : default_data_prior(options.k);
    if (prior.alpha.rows != options.k || prior.alpha.cols != options.k || !prior.alpha.same_shape(prior.beta))
        throw std::runtime_error("fit_mm: block prior shape does not match k");

    if (options.warm_start) {
        FitOptions pre;
        pre.k = options.k;
        pre.tau = options.warm_start_tau;
        pre.seed = Rng::hash_name("mm_warm_start") ^ options.seed;
        pre.gradient_mode = net.mode == CovariateMode::binary ? GradientMode::exact : GradientMode::gibbs;
        pre.chains = options.chains;
        pre.prior = prior;
        pre.elbo_every = 0;
        auto [pre_state, pre_report] = fit(net, pre);
        for (int i = 0; i < n; ++i)
            for (int l = 0; l < options.k; ++l)
                state.mu_raw(i, l) = std::log(1.0 + options.warm_start_scale * pre_state.q(i, l));
        state.rbm.W = pre_state.rbm.W;
        state.rbm.u = pre_state.rbm.u;
        state.rbm.v = pre_state.rbm.v;
    }
    const double eps_m = options.epsilon > 0.0 ? options.epsilon : 1.0 / std::max(1, n);
    const double eps_e = options.e_epsilon > 0.0 ? options.e_epsilon : 1.0 / std::max(1, n);

    SimplexGibbs sampler(options.chains, net.m, options.k, options.seed);
    sampler.burn_in(state.rbm, options.burnin);

    {
        LogOmegaEstimate est = estimate_log_omega(state.rbm, options.omega_samples, options.seed);
        state.log_omega = est.value;
        state.log_omega_se = est.se;
    }

    MmFitReport report;
    for (int t = 0; t < options.tau; ++t) {
        auto t0 = std::chrono::steady_clock::now();
        fit_e_step(state, net, prior, options.xi, eps_e, options.phi_damping);
        m_step_mm(state, net, options.xi, eps_m, sampler, options.thin, options.moment_samples);
        auto t1 = std::chrono::steady_clock::now();
        report.iter_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());

        if (options.elbo_every > 0 && (t % options.elbo_every == 0 || t + 1 == options.tau)) {
            LogOmegaEstimate est =
                estimate_log_omega(state.rbm, options.omega_samples, options.seed + 0x9e37 * (t + 1));
            state.log_omega = est.value;
            state.log_omega_se = est.se;
            state.elbo_trace.push_back(elbo_mm(state, net, prior));
        }
        report.iterations = t + 1;
    }

    report.elbo_trace = state.elbo_trace;
    report.memberships = state.memberships();
    report.block_mean = state.block_posterior().posterior_mean();
    report.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        const double* qi = report.memberships.row(i);
        report.labels[i] = static_cast<int>(std::max_element(qi, qi + options.k) - qi);
    }
    return {std::move(state), std::move(report)};
}

SelectKResult select_k(const AttributedNetwork& net, const std::vector<int>& k_range, const MmFitOptions& options) {
    if (k_range.empty()) throw std::runtime_error("select_k: empty k range");
    SelectKResult res;
    double best = -1e300;
    for (int k : k_range) {
        MmFitOptions opts = options;
        opts.k = k;
        // A provided prior fixes the constants, not the matrix shape; rebuild
        // it at each k (constant alpha, constant diagonal and off-diagonal beta).
        if (options.prior && options.prior->alpha.rows != k) {
            const BlockPrior& base = *options.prior;
            double off = base.beta.rows > 1 ? base.beta(0, 1) : base.beta(0, 0);
            opts.prior = BlockPrior::constant(k, base.alpha(0, 0), base.beta(0, 0), off);
        }
        auto [state, report] = fit_mm(net, opts);
        const BlockPrior prior = opts.prior ? *opts.prior : default_data_prior(k);
        SelectKRow row;
        row.k = k;
        row.elbo_with_omega = elbo_mm(state, net, prior);
        row.elbo_without_omega = row.elbo_with_omega + net.n * state.log_omega;
        row.log_omega = state.log_omega;
        row.log_omega_se = state.log_omega_se;
        res.table.push_back(row);
        if (row.elbo_with_omega > best) {
            best = row.elbo_with_omega;
            res.chosen_k = k;
        }
    }
    return res;
}

}  // namespace rbnet
