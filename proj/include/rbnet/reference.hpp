#pragma once

// Serial reference implementations: direct O(n^2) double loops written
// straight from the model equations, with none of the sparse reformulations
// or OpenMP chunking of the production kernels. Tests pin the fast paths
// against these; the benchmark tool compares their running times.

#include "rbnet/infer_rbmmsbm.hpp"
#include "rbnet/infer_rbsbm.hpp"
#include "rbnet/network.hpp"
#include "rbnet/sbm_block.hpp"

namespace rbnet::reference {

BlockPosterior update_block_posteriors_naive(const Mat& q, const AttributedNetwork& net, const BlockPrior& prior,
                                             const std::vector<Edge>& mask);

std::vector<double> update_node_posterior_naive(const VariationalStateSbm& state, const AttributedNetwork& net,
                                                int node);

double elbo_naive(const VariationalStateSbm& state, const AttributedNetwork& net, const BlockPrior& prior);

// Term-by-term mixed-membership ELBO written independently from the
// production assembly (dense loops, direct entropy formulas).
double elbo_mm_naive(const VariationalStateMm& state, const AttributedNetwork& net, const BlockPrior& prior);

}  // namespace rbnet::reference
