#pragma once

#include <cstdint>

#include "rbnet/mat.hpp"

namespace rbnet {

struct BlockPrior {
    Mat alpha;  // k x k, strictly positive
    Mat beta;

    static BlockPrior constant(int k, double a, double b_diag, double b_off);
};

struct BlockPosterior {
    Mat alpha_bar;  // k x k
    Mat beta_bar;

    Mat posterior_mean() const;  // alpha_bar / (alpha_bar + beta_bar)
};

// Independent Beta draws per entry.
Mat sample_block(const BlockPrior& prior, std::uint64_t seed);

// E[ln B] = psi(a) - psi(a+b), E[ln(1-B)] = psi(b) - psi(a+b), elementwise.
void expected_log_b(const BlockPosterior& post, Mat& eln_b, Mat& eln_1mb);

// zi^T B zj for membership vectors on the simplex (one-hot included).
double edge_prob(const Mat& block, const double* zi, const double* zj);

}  // namespace rbnet
