#include "rbnet/sbm_block.hpp"

#include <stdexcept>

#include "rbnet/rng.hpp"
#include "rbnet/special.hpp"

namespace rbnet {

BlockPrior BlockPrior::constant(int k, double a, double b_diag, double b_off) {
    BlockPrior p;
    p.alpha = Mat(k, k, a);
    p.beta = Mat(k, k, b_off);
    for (int i = 0; i < k; ++i) p.beta(i, i) = b_diag;
    return p;
}

Mat BlockPosterior::posterior_mean() const {
    Mat m(alpha_bar.rows, alpha_bar.cols);
    for (size_t i = 0; i < m.data.size(); ++i)
        m.data[i] = alpha_bar.data[i] / (alpha_bar.data[i] + beta_bar.data[i]);
    return m;
}

Mat sample_block(const BlockPrior& prior, std::uint64_t seed) {
    Rng rng = Rng::stream(seed, "block");
    Mat b(prior.alpha.rows, prior.alpha.cols);
    for (size_t i = 0; i < b.data.size(); ++i) b.data[i] = rng.beta(prior.alpha.data[i], prior.beta.data[i]);
    return b;
}

void expected_log_b(const BlockPosterior& post, Mat& eln_b, Mat& eln_1mb) {
    const int k = post.alpha_bar.rows;
    eln_b = Mat(k, k);
    eln_1mb = Mat(k, k);
    for (size_t i = 0; i < post.alpha_bar.data.size(); ++i) {
        double a = post.alpha_bar.data[i];
        double b = post.beta_bar.data[i];
        if (!(a > 0.0) || !(b > 0.0)) throw std::runtime_error("expected_log_b: nonpositive Beta parameter");
        double dab = digamma(a + b);
        eln_b.data[i] = digamma(a) - dab;
        eln_1mb.data[i] = digamma(b) - dab;
    }
}

double edge_prob(const Mat& block, const double* zi, const double* zj) {
    const int k = block.rows;
    double p = 0.0;
    for (int a = 0; a < k; ++a) {
        if (zi[a] == 0.0) continue;
        double acc = 0.0;
        const double* row = block.row(a);
        for (int b = 0; b < k; ++b) acc += row[b] * zj[b];
        p += zi[a] * acc;
    }
    return p;
}

}  // namespace rbnet
