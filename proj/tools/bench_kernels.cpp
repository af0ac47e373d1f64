// Compares the OpenMP kernels against the serial reference implementations
// on synthetic instances: same inputs, timed side by side, max |diff| shown
// as a sanity column. Run with --threads N (or OMP_NUM_THREADS) to vary the
// worker count.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rbnet/generator.hpp"
#include "rbnet/infer_rbmmsbm.hpp"
#include "rbnet/infer_rbsbm.hpp"
#include "rbnet/reference.hpp"
#include "rbnet/rng.hpp"

using namespace rbnet;

namespace {

double now_s() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        double t0 = now_s();
        f();
        best = std::min(best, now_s() - t0);
    }
    return best;
}

void report(const char* name, double serial_s, double parallel_s, double diff) {
    std::printf("%-28s %10.1f ms %10.1f ms %7.2fx   max|diff|=%.3g\n", name, serial_s * 1e3, parallel_s * 1e3,
                serial_s / parallel_s, diff);
}

}  // namespace

int main(int argc, char** argv) {
    int threads = 0;
    for (int i = 1; i + 1 < argc; i += 2)
        if (std::string(argv[i]) == "--threads") threads = std::stoi(argv[i + 1]);
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
    std::printf("threads: %d\n", threads > 0 ? threads : omp_get_max_threads());
#endif

    // Pure-membership instance sized so the naive O(n^2 k^2) loops stay sane.
    const int n = 1200, k = 6;
    auto cfg = synth_config(n, SynthKind::pure, 3, 40, k);
    auto g = generate_rbsbm(cfg, 4);
    g.net.build_column_index();
    std::printf("rbsbm instance: n=%d |E|=%d k=%d m=%d\n", g.net.n, g.net.num_edges(), k, g.net.m);

    Rng rng(9);
    VariationalStateSbm st;
    st.q = Mat(n, k);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int l = 0; l < k; ++l) {
            st.q(i, l) = rng.uniform_pos();
            s += st.q(i, l);
        }
        for (int l = 0; l < k; ++l) st.q(i, l) /= s;
    }
    st.rbm = init_rbm_params(g.net, k, rng, CovariateMode::binary);
    st.set_mask(n, {});
    BlockPrior prior = cfg.prior;

    std::printf("%-28s %13s %13s %9s\n", "kernel", "serial", "openmp", "speedup");

    BlockPosterior fast_post, naive_post;
    double t_par = time_best_of(3, [&] { fast_post = update_block_posteriors(st, g.net, prior); });
    double t_ser = time_best_of(1, [&] { naive_post = reference::update_block_posteriors_naive(st.q, g.net, prior, {}); });
    report("block posterior update", t_ser, t_par,
           std::max(max_abs_diff(fast_post.alpha_bar, naive_post.alpha_bar),
                    max_abs_diff(fast_post.beta_bar, naive_post.beta_bar)));
    st.block_post = fast_post;

    std::vector<double> fast_row, naive_row;
    double t_node_par = time_best_of(3, [&] {
        for (int i = 0; i < 256; ++i) fast_row = update_node_posterior(st, g.net, i);
    });
    double t_node_ser = time_best_of(1, [&] {
        for (int i = 0; i < 256; ++i) naive_row = reference::update_node_posterior_naive(st, g.net, i);
    });
    double node_diff = 0.0;
    for (int l = 0; l < k; ++l) node_diff = std::max(node_diff, std::abs(fast_row[l] - naive_row[l]));
    report("node posterior (256 rows)", t_node_ser, t_node_par, node_diff);

    double fast_elbo = 0.0, naive_elbo = 0.0;
    double t_elbo_par = time_best_of(3, [&] { fast_elbo = elbo(st, g.net, prior); });
    double t_elbo_ser = time_best_of(1, [&] { naive_elbo = reference::elbo_naive(st, g.net, prior); });
    report("elbo", t_elbo_ser, t_elbo_par, std::abs(fast_elbo - naive_elbo));

    // Mixed-membership instance; the pair-factor loops dominate.
    const int nm = 220, km = 3;
    auto cfg_mm = synth_config(nm, SynthKind::mixed, 5, 5, km);
    auto gm = generate_rbmmsbm(cfg_mm, 6);
    gm.net.build_column_index();
    std::printf("rbmmsbm instance: n=%d |E|=%d k=%d m=%d\n", gm.net.n, gm.net.num_edges(), km, gm.net.m);
    MmFitOptions mo;
    mo.k = km;
    mo.seed = 7;
    VariationalStateMm stm = init_state_mm(gm.net, mo);
    Rng rng2(11);
    for (auto& x : stm.mu_raw.data) x = (rng2.uniform() * 2.0 - 1.0) * 0.5;
    for (auto& x : stm.phi_out_raw.data) x = (rng2.uniform() * 2.0 - 1.0) * 0.5;
    for (auto& x : stm.phi_in_raw.data) x = (rng2.uniform() * 2.0 - 1.0) * 0.5;
    BlockPrior prior_mm = cfg_mm.prior;

    double fast_mm = 0.0, naive_mm = 0.0;
    double t_mm_par = time_best_of(3, [&] { fast_mm = elbo_mm(stm, gm.net, prior_mm); });
    double t_mm_ser = time_best_of(1, [&] { naive_mm = reference::elbo_mm_naive(stm, gm.net, prior_mm); });
    report("mixed-membership elbo", t_mm_ser, t_mm_par, std::abs(fast_mm - naive_mm));

    MmGradients grads;
    double t_grad = time_best_of(3, [&] { grads = mm_elbo_gradients(stm, gm.net, prior_mm); });
    std::printf("%-28s %10s    %8.1f ms     (no serial twin; used by e_step)\n", "mm gradient accumulation", "-",
                t_grad * 1e3);
    return 0;
}
