#pragma once

#include <cstdint>
#include <string>

#include "rbnet/network.hpp"
#include "rbnet/rbm_onehot.hpp"
#include "rbnet/rbm_simplex.hpp"
#include "rbnet/sbm_block.hpp"

namespace rbnet {

enum class SynthKind { pure, mixed };

// Benchmark family: alpha = 1 everywhere, beta = sqrt(n) on the diagonal and
// 10 sqrt(n) off it; covariates take an assortative (+5), disassortative (-5)
// or neutral (0) role with probabilities 0.1 / 0.1 / 0.8; u = -2, v = 0.
// Pure kind defaults m = 100, k = floor(log2 n).
struct SynthConfig {
    int n = 0;
    int m = 0;
    int k = 0;
    SynthKind kind = SynthKind::pure;
    BlockPrior prior;
    Mat W;                  // m x k, entries in {+5, -5, 0}
    std::vector<double> u;  // -2
    std::vector<double> v;  // 0
    double p_plus = 0.1, p_minus = 0.1, p_zero = 0.8;
    double w_mag = 5.0;
};

SynthConfig synth_config(int n, SynthKind kind, std::uint64_t seed, int m = -1, int k = -1);

// Everything the recovery experiments need, kept alongside the sample.
struct GroundTruth {
    Mat block;       // sampled B
    Mat z;           // n x k memberships (one-hot rows for the pure model)
    Mat W;           // RBM weights used
    std::vector<double> u, v;
};

struct GeneratedNetwork {
    AttributedNetwork net;
    GroundTruth truth;
};

GeneratedNetwork generate_rbsbm(const SynthConfig& cfg, std::uint64_t seed);
GeneratedNetwork generate_rbmmsbm(const SynthConfig& cfg, std::uint64_t seed);

void save_ground_truth(const std::string& dir, const GroundTruth& truth);
GroundTruth load_ground_truth(const std::string& dir);

}  // namespace rbnet
