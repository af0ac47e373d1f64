#pragma once

#include <string>
#include <vector>

#include "rbnet/mat.hpp"

namespace rbnet {

// Normalized mutual information, arithmetic-mean normalization, natural logs.
// Two single-cluster partitions over the same nodes count as identical (1.0).
double nmi(const std::vector<int>& labels_a, const std::vector<int>& labels_b);

// Mann-Whitney rank AUC; ties count 0.5.
double auc(const std::vector<double>& pos_scores, const std::vector<double>& neg_scores);

// Jensen-Shannon divergence in nats; bounded by ln 2.
double js_divergence(const std::vector<double>& p, const std::vector<double>& q);
double js_divergence(const double* p, const double* q, int k);

// Maximum-weight matching on the column-correlation matrix of two n x k
// membership matrices. perm[j] = truth column matched to est column j.
std::vector<int> align_communities(const Mat& est, const Mat& truth);

// Hungarian solver on a k x k score matrix (maximize), exposed for reuse.
std::vector<int> max_weight_assignment(const Mat& score);

double pearson(const double* x, const double* y, int n);

struct CommunityProfile {
    int community = 0;
    std::vector<std::pair<int, double>> top_covariates;  // (covariate, W_jl), descending
    std::vector<std::pair<int, double>> top_members;     // (node, membership), descending
    std::vector<double> block_row;  // B_hat(l, .)
    std::vector<double> block_col;  // B_hat(., l)
};

std::vector<CommunityProfile> community_profiles(const Mat& W, const Mat& memberships, const Mat& block_mean,
                                                 int top_n);

void save_profiles(const std::string& path, const std::vector<CommunityProfile>& profiles);

// Mann-Kendall one-sided test for an increasing trend; returns the p-value
// (normal approximation with tie correction).
double mann_kendall_pvalue(const std::vector<double>& series);

// R^2 of the least-squares line y = a + b x.
double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rbnet
