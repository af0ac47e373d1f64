#include "rbnet/infer_rbsbm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rbnet/eval.hpp"
#include "rbnet/special.hpp"

namespace rbnet {

void VariationalStateSbm::set_mask(int n, std::vector<Edge> sorted_mask) {
    mask = std::move(sorted_mask);
    std::sort(mask.begin(), mask.end());
    mask_out.assign(n, {});
    mask_in.assign(n, {});
    for (auto& [s, t] : mask) {
        mask_out[s].push_back(t);
        mask_in[t].push_back(s);
    }
}

BlockPrior default_data_prior(int k) { return BlockPrior::constant(k, 1.0, 1.0, 10.0); }

// sum over `pairs` of q_i(a) q_j(b), accumulated in fixed chunks so the
// result does not depend on the thread count.
static Mat pair_outer_sum(const Mat& q, const std::vector<Edge>& pairs) {
    const int k = q.cols;
    const int chunks = 64;
    const size_t total = pairs.size();
    std::vector<Mat> partial(chunks, Mat(k, k));
#pragma omp parallel for schedule(static)
    for (int c = 0; c < chunks; ++c) {
        size_t lo = total * c / chunks, hi = total * (c + 1) / chunks;
        Mat& acc = partial[c];
        for (size_t e = lo; e < hi; ++e) {
            const double* qi = q.row(pairs[e].first);
            const double* qj = q.row(pairs[e].second);
            for (int a = 0; a < k; ++a) {
                if (qi[a] == 0.0) continue;
                double* arow = acc.row(a);
                for (int b = 0; b < k; ++b) arow[b] += qi[a] * qj[b];
            }
        }
    }
    Mat out(k, k);
    for (auto& p : partial)
        for (size_t t = 0; t < out.data.size(); ++t) out.data[t] += p.data[t];
    return out;
}

static std::vector<double> column_sums(const Mat& q) {
    std::vector<double> s(q.cols, 0.0);
    for (int i = 0; i < q.rows; ++i) {
        const double* r = q.row(i);
        for (int l = 0; l < q.cols; ++l) s[l] += r[l];
    }
    return s;
}

// Masked pairs may (in principle) still sit in the stored edge set, so they
// are split by edge-ness: masked edges leave the alpha sum, masked non-edges
// leave the beta sum.
static void split_mask(const AttributedNetwork& net, const std::vector<Edge>& mask, std::vector<Edge>& mask_edges,
                       std::vector<Edge>& mask_non) {
    for (auto& e : mask)
        (net.has_edge(e.first, e.second) ? mask_edges : mask_non).push_back(e);
}

BlockPosterior update_block_posteriors(const VariationalStateSbm& state, const AttributedNetwork& net,
                                       const BlockPrior& prior) {
    const int k = state.q.cols;
    std::vector<Edge> mask_edges, mask_non;
    split_mask(net, state.mask, mask_edges, mask_non);
    const Mat edge_sum = pair_outer_sum(state.q, net.edges);
    const Mat mask_edge_sum = mask_edges.empty() ? Mat(k, k) : pair_outer_sum(state.q, mask_edges);
    const Mat mask_non_sum = mask_non.empty() ? Mat(k, k) : pair_outer_sum(state.q, mask_non);
    const std::vector<double> colsum = column_sums(state.q);
    Mat self_sum(k, k);
    for (int i = 0; i < net.n; ++i) {
        const double* qi = state.q.row(i);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) self_sum(a, b) += qi[a] * qi[b];
    }
    BlockPosterior post;
    post.alpha_bar = Mat(k, k);
    post.beta_bar = Mat(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            post.alpha_bar(a, b) = prior.alpha(a, b) + edge_sum(a, b) - mask_edge_sum(a, b);
            double nonedge = colsum[a] * colsum[b] - self_sum(a, b) - edge_sum(a, b) - mask_non_sum(a, b);
            post.beta_bar(a, b) = prior.beta(a, b) + std::max(0.0, nonedge);
        }
    return post;
}

namespace {

// Per-E-step cache: digamma tables of the current block posterior plus the
// running column sums of q.
struct NodeUpdateCtx {
    Mat eln_b, eln_1mb;
    std::vector<double> colsum;
};

std::vector<double> node_potentials(const VariationalStateSbm& state, const AttributedNetwork& net, int node,
                                    const NodeUpdateCtx& ctx) {
    const int k = state.q.cols;
    std::vector<double> pot(state.rbm.v);
    for (auto& [j, val] : net.y_rows[node]) {
        const double* wrow = state.rbm.W.row(j);
        for (int l = 0; l < k; ++l) pot[l] += val * wrow[l];
    }
    const double* qi = state.q.row(node);

    // Incoming side: observed-edge partner weights, everything masked, and the
    // remainder (= unmasked non-edges) via the total column sums.
    std::vector<double> in_edge(k, 0.0), out_edge(k, 0.0), in_excl(k, 0.0), out_excl(k, 0.0);
    for (int j : net.in_nbrs[node]) {
        const double* qj = state.q.row(j);
        for (int l = 0; l < k; ++l) in_edge[l] += qj[l];
    }
    for (int j : net.out_nbrs[node]) {
        const double* qj = state.q.row(j);
        for (int l = 0; l < k; ++l) out_edge[l] += qj[l];
    }
    if (!state.mask.empty()) {
        for (int j : state.mask_in[node]) {
            const double* qj = state.q.row(j);
            const bool is_edge = net.has_edge(j, node);
            for (int l = 0; l < k; ++l) {
                in_excl[l] += qj[l];
                if (is_edge) in_edge[l] -= qj[l];
            }
        }
        for (int j : state.mask_out[node]) {
            const double* qj = state.q.row(j);
            const bool is_edge = net.has_edge(node, j);
            for (int l = 0; l < k; ++l) {
                out_excl[l] += qj[l];
                if (is_edge) out_edge[l] -= qj[l];
            }
        }
    }
    for (int l1 = 0; l1 < k; ++l1) {
        double in_non = ctx.colsum[l1] - qi[l1] - in_edge[l1] - in_excl[l1];
        double out_non = ctx.colsum[l1] - qi[l1] - out_edge[l1] - out_excl[l1];
        for (int l = 0; l < k; ++l) {
            pot[l] += in_edge[l1] * ctx.eln_b(l1, l) + in_non * ctx.eln_1mb(l1, l);
            pot[l] += out_edge[l1] * ctx.eln_b(l, l1) + out_non * ctx.eln_1mb(l, l1);
        }
    }
    return pot;
}

}  // namespace

std::vector<double> update_node_posterior(const VariationalStateSbm& state, const AttributedNetwork& net, int node) {
    NodeUpdateCtx ctx;
    expected_log_b(state.block_post, ctx.eln_b, ctx.eln_1mb);
    ctx.colsum = column_sums(state.q);
    auto pot = node_potentials(state, net, node, ctx);
    softmax_inplace(pot.data(), static_cast<int>(pot.size()));
    return pot;
}

std::vector<double> anneal(const std::vector<double>& q_row, double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0)) throw std::runtime_error("anneal: lambda must lie in (0,1]");
    if (lambda == 1.0) return q_row;
    const double scale = std::pow(2.0, lambda - 1.0);
    std::vector<double> out(q_row.size());
    double sum = 0.0;
    for (size_t l = 0; l < q_row.size(); ++l) {
        double x = q_row[l];
        out[l] = x <= 0.5 ? scale * std::pow(x, lambda) : 1.0 - scale * std::pow(1.0 - x, lambda);
        sum += out[l];
    }
    for (auto& x : out) x /= sum;
    return out;
}

double expected_log_joint_rbm_part(const Mat& q, const AttributedNetwork& net, const RbmParams& rbm) {
    const int k = rbm.k();
    double obj = 0.0;
    for (int i = 0; i < net.n; ++i) {
        const double* qi = q.row(i);
        for (auto& [j, val] : net.y_rows[i]) {
            double wq = rbm.u[j];
            const double* wrow = rbm.W.row(j);
            for (int l = 0; l < k; ++l) wq += wrow[l] * qi[l];
            obj += val * wq;
        }
        for (int l = 0; l < k; ++l) obj += rbm.v[l] * qi[l];
    }
    return obj - net.n * log_partition(rbm);
}

RbmGradient m_step_gradient(const Mat& q, const AttributedNetwork& net, const RbmParams& rbm,
                            const RbmMoments& moments) {
    const int m = rbm.m(), k = rbm.k();
    const double n = static_cast<double>(net.n);
    RbmGradient g;
    g.dW = Mat(m, k);
    g.du.assign(m, 0.0);
    g.dv.assign(k, 0.0);
    if (net.y_cols.empty() && net.m > 0 && net.n > 0) throw std::runtime_error("m_step_gradient: column index missing");
#pragma omp parallel for schedule(dynamic, 16)
    for (int j = 0; j < m; ++j) {
        double* grow = g.dW.row(j);
        double su = 0.0;
        for (auto& [i, val] : net.y_cols[j]) {
            const double* qi = q.row(i);
            for (int l = 0; l < k; ++l) grow[l] += val * qi[l];
            su += val;
        }
        for (int l = 0; l < k; ++l) grow[l] -= n * moments.eyz(j, l);
        g.du[j] = su - n * moments.ey[j];
    }
    const std::vector<double> colsum = column_sums(q);
    for (int l = 0; l < k; ++l) g.dv[l] = colsum[l] - n * moments.ez[l];
    return g;
}

RbmParams m_step(const VariationalStateSbm& state, const AttributedNetwork& net, const FitOptions& options,
                 OneHotGibbs* sampler) {
    RbmParams rbm = state.rbm;
    const double eps = options.epsilon > 0.0 ? options.epsilon : 1.0 / std::max(1, net.n);
    OneHotGibbs* chains = sampler;
    OneHotGibbs local(1, 1, 0);
    if (options.gradient_mode == GradientMode::gibbs && chains == nullptr) {
        local = OneHotGibbs(options.chains, net.m, options.seed);
        local.burn_in(rbm, options.burnin);
        chains = &local;
    }
    for (int step = 0; step < options.xi; ++step) {
        RbmMoments mo;
        if (options.gradient_mode == GradientMode::exact) {
            mo = exact_moments(rbm);
        } else {
            chains->reset_samples();
            chains->step_and_collect(rbm, options.thin);
            mo = chains->moments(rbm);
        }
        RbmGradient g = m_step_gradient(state.q, net, rbm, mo);
        bool ok = true;
        for (double x : g.dW.data) ok = ok && std::isfinite(x);
        for (double x : g.du) ok = ok && std::isfinite(x);
        for (double x : g.dv) ok = ok && std::isfinite(x);
        if (!ok) throw std::runtime_error("m_step: non-finite gradient (diverged RBM parameters?)");
        for (size_t t = 0; t < rbm.W.data.size(); ++t) rbm.W.data[t] += eps * g.dW.data[t];
        for (int j = 0; j < rbm.m(); ++j) rbm.u[j] += eps * g.du[j];
        for (int l = 0; l < rbm.k(); ++l) rbm.v[l] += eps * g.dv[l];
    }
    return rbm;
}

double elbo(const VariationalStateSbm& state, const AttributedNetwork& net, const BlockPrior& prior) {
    const int k = state.q.cols;
    Mat eln_b, eln_1mb;
    expected_log_b(state.block_post, eln_b, eln_1mb);

    // Beta prior cross-entropy and posterior entropy.
    double term_prior = 0.0, term_ent_b = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            double al = prior.alpha(a, b), be = prior.beta(a, b);
            term_prior += (al - 1.0) * eln_b(a, b) + (be - 1.0) * eln_1mb(a, b) - ln_beta(al, be);
            double ab = state.block_post.alpha_bar(a, b), bb = state.block_post.beta_bar(a, b);
            term_ent_b += ln_beta(ab, bb) - (ab - 1.0) * digamma(ab) - (bb - 1.0) * digamma(bb) +
                          (ab + bb - 2.0) * digamma(ab + bb);
        }

    const double term_yz = expected_log_joint_rbm_part(state.q, net, state.rbm);

    // Adjacency term via the non-edge identity plus categorical entropy.
    std::vector<Edge> mask_edges, mask_non;
    split_mask(net, state.mask, mask_edges, mask_non);
    const Mat edge_sum = pair_outer_sum(state.q, net.edges);
    const Mat mask_edge_sum = mask_edges.empty() ? Mat(k, k) : pair_outer_sum(state.q, mask_edges);
    const Mat mask_non_sum = mask_non.empty() ? Mat(k, k) : pair_outer_sum(state.q, mask_non);
    const std::vector<double> colsum = column_sums(state.q);
    Mat self_sum(k, k);
    double term_ent_z = 0.0;
    for (int i = 0; i < net.n; ++i) {
        const double* qi = state.q.row(i);
        for (int a = 0; a < k; ++a) {
            for (int b = 0; b < k; ++b) self_sum(a, b) += qi[a] * qi[b];
            if (qi[a] > 0.0) term_ent_z -= qi[a] * std::log(qi[a]);
        }
    }
    double term_a = 0.0;
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) {
            double nonedge = colsum[a] * colsum[b] - self_sum(a, b) - edge_sum(a, b) - mask_non_sum(a, b);
            term_a += (edge_sum(a, b) - mask_edge_sum(a, b)) * eln_b(a, b) + nonedge * eln_1mb(a, b);
        }

    return term_prior + term_yz + term_a + term_ent_z + term_ent_b;
}

std::pair<VariationalStateSbm, FitReport> fit(const AttributedNetwork& net, const FitOptions& options) {
    const int n = net.n, k = options.k;
    if (k < 1) throw std::runtime_error("fit: k must be >= 1");
    if (k > n) throw std::runtime_error("fit: k must not exceed the node count");
    const int batch = options.batch > 0 ? std::min(options.batch, n) : std::min(n, 256);
    const BlockPrior prior = options.prior ? *options.prior : default_data_prior(k);
    if (prior.alpha.rows != k || prior.alpha.cols != k || !prior.alpha.same_shape(prior.beta))
        throw std::runtime_error("fit: block prior shape does not match k");

    AttributedNetwork net_indexed;  // local copy only if the column index is missing
    const AttributedNetwork* netp = &net;
    if (net.y_cols.empty() && net.m > 0) {
        net_indexed = net;
        net_indexed.build_column_index();
        netp = &net_indexed;
    }

    VariationalStateSbm state;
    state.q = Mat(n, k, 1.0 / k);
    Rng init_rng = Rng::stream(options.seed, "init");
    state.rbm = options.initial_params ? *options.initial_params : init_rbm_params(net, k, init_rng, net.mode);
    if (state.rbm.m() != net.m || state.rbm.k() != k) throw std::runtime_error("fit: initial params shape mismatch");
    state.set_mask(n, options.mask);

    OneHotGibbs sampler(std::max(1, options.chains), net.m, options.seed);
    bool sampler_ready = false;

    Rng batch_rng = Rng::stream(options.seed, "batch");
    std::vector<int> node_ids(n);
    for (int i = 0; i < n; ++i) node_ids[i] = i;

    FitReport report;
    report.nmi_trace.reserve(net.labels.empty() ? 0 : options.tau);
    NodeUpdateCtx ctx;

    int stall = 0;
    for (int t = 0; t < options.tau; ++t) {
        auto t0 = std::chrono::steady_clock::now();
        state.lambda = options.anneal && options.tau > 1
                           ? options.lambda0 + (1.0 - options.lambda0) * (static_cast<double>(t) / (options.tau - 1))
                           : 1.0;

        // E-step: all block factors first, then a random node batch.
        state.block_post = update_block_posteriors(state, *netp, prior);
        expected_log_b(state.block_post, ctx.eln_b, ctx.eln_1mb);
        ctx.colsum = column_sums(state.q);

        for (int b = 0; b < batch; ++b) {
            int j = b + batch_rng.uniform_int(n - b);
            std::swap(node_ids[b], node_ids[j]);
        }
        for (int b = 0; b < batch; ++b) {
            const int i = node_ids[b];
            auto pot = node_potentials(state, *netp, i, ctx);
            softmax_inplace(pot.data(), k);
            double* qi = state.q.row(i);
            for (int l = 0; l < k; ++l) {
                ctx.colsum[l] += pot[l] - qi[l];
                qi[l] = pot[l];
            }
        }
        if (state.lambda < 1.0) {
            for (int b = 0; b < batch; ++b) {
                const int i = node_ids[b];
                double* qi = state.q.row(i);
                auto squashed = anneal(std::vector<double>(qi, qi + k), state.lambda);
                for (int l = 0; l < k; ++l) {
                    ctx.colsum[l] += squashed[l] - qi[l];
                    qi[l] = squashed[l];
                }
            }
        }

        // M-step.
        if (!options.freeze_rbm) {
            if (options.gradient_mode == GradientMode::gibbs && !sampler_ready) {
                sampler.burn_in(state.rbm, options.burnin);
                sampler_ready = true;
            }
            state.rbm = m_step(state, *netp, options,
                               options.gradient_mode == GradientMode::gibbs ? &sampler : nullptr);
        }
        auto t1 = std::chrono::steady_clock::now();
        report.iter_seconds.push_back(std::chrono::duration<double>(t1 - t0).count());

        if (options.elbo_every > 0 && (t % options.elbo_every == 0 || t + 1 == options.tau)) {
            double e = elbo(state, *netp, prior);
            state.elbo_trace.push_back(e);
            if (options.early_stop && state.elbo_trace.size() > 20) {
                double prev = state.elbo_trace[state.elbo_trace.size() - 21];
                if (std::abs(e - prev) < 1e-6 * std::abs(e))
                    ++stall;
                else
                    stall = 0;
                if (stall >= 1) {
                    report.iterations = t + 1;
                    break;
                }
            }
        }
        if (!net.labels.empty()) {
            std::vector<int> cur(n);
            for (int i = 0; i < n; ++i) {
                const double* qi = state.q.row(i);
                cur[i] = static_cast<int>(std::max_element(qi, qi + k) - qi);
            }
            report.nmi_trace.push_back(nmi(cur, net.labels));
        }
        report.iterations = t + 1;
    }

    report.elbo_trace = state.elbo_trace;
    report.block_mean = state.block_post.posterior_mean();
    report.labels.resize(n);
    for (int i = 0; i < n; ++i) {
        const double* qi = state.q.row(i);
        report.labels[i] = static_cast<int>(std::max_element(qi, qi + k) - qi);
    }
    return {std::move(state), std::move(report)};
}

LinkPrediction predict_links(const VariationalStateSbm& state, const LinkSplit& split) {
    LinkPrediction out;
    const Mat bhat = state.block_post.posterior_mean();
    auto in_mask = [&](const Edge& e) {
        return std::binary_search(state.mask.begin(), state.mask.end(), e);
    };
    std::vector<double> pos, neg;
    auto score_all = [&](const std::vector<Edge>& pairs, int is_pos) {
        for (auto& e : pairs) {
            if (!in_mask(e)) throw std::runtime_error("predict_links: pair not in the fitted mask");
            double s = edge_prob(bhat, state.q.row(e.first), state.q.row(e.second));
            out.pairs.push_back(e);
            out.scores.push_back(s);
            out.is_positive.push_back(is_pos);
            (is_pos ? pos : neg).push_back(s);
        }
    };
    score_all(split.heldout_pos, 1);
    score_all(split.heldout_neg, 0);
    out.auc = auc(pos, neg);
    return out;
}

}  // namespace rbnet
