#include "rbnet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "rbnet/io.hpp"
#include "rbnet/special.hpp"

namespace rbnet {

double nmi(const std::vector<int>& labels_a, const std::vector<int>& labels_b) {
    if (labels_a.empty() || labels_a.size() != labels_b.size())
        throw std::runtime_error("nmi: label vectors must be nonempty and equal length");
    const double n = static_cast<double>(labels_a.size());
    std::map<int, int> ca, cb;
    std::map<std::pair<int, int>, int> cab;
    for (size_t i = 0; i < labels_a.size(); ++i) {
        ++ca[labels_a[i]];
        ++cb[labels_b[i]];
        ++cab[{labels_a[i], labels_b[i]}];
    }
    auto entropy = [&](const std::map<int, int>& c) {
        double h = 0.0;
        for (auto& [_, cnt] : c) {
            double p = cnt / n;
            h -= p * std::log(p);
        }
        return h;
    };
    double ha = entropy(ca), hb = entropy(cb);
    if (ha == 0.0 && hb == 0.0) return 1.0;  // both trivial partitions group everything together
    double mi = 0.0;
    for (auto& [ab, cnt] : cab) {
        double pab = cnt / n;
        double pa = ca[ab.first] / n;
        double pb = cb[ab.second] / n;
        mi += pab * std::log(pab / (pa * pb));
    }
    return mi / (0.5 * (ha + hb));
}

double auc(const std::vector<double>& pos_scores, const std::vector<double>& neg_scores) {
    if (pos_scores.empty() || neg_scores.empty()) throw std::runtime_error("auc: empty score list");
    // Average ranks in the merged ordering, U statistic from the positive ranks.
    std::vector<std::pair<double, int>> all;  // (score, is_pos)
    all.reserve(pos_scores.size() + neg_scores.size());
    for (double s : pos_scores) all.emplace_back(s, 1);
    for (double s : neg_scores) all.emplace_back(s, 0);
    std::sort(all.begin(), all.end(), [](auto& a, auto& b) { return a.first < b.first; });
    double rank_sum_pos = 0.0;
    size_t i = 0;
    while (i < all.size()) {
        size_t j = i;
        while (j < all.size() && all[j].first == all[i].first) ++j;
        double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (size_t t = i; t < j; ++t)
            if (all[t].second) rank_sum_pos += avg_rank;
        i = j;
    }
    const double np = static_cast<double>(pos_scores.size());
    const double nn = static_cast<double>(neg_scores.size());
    double u = rank_sum_pos - np * (np + 1.0) / 2.0;
    return u / (np * nn);
}

double js_divergence(const double* p, const double* q, int k) {
    double sp = 0.0, sq = 0.0;
    for (int i = 0; i < k; ++i) {
        if (p[i] < -1e-12 || q[i] < -1e-12) throw std::runtime_error("js_divergence: negative entry");
        sp += p[i];
        sq += q[i];
    }
    if (std::abs(sp - 1.0) > 1e-6 || std::abs(sq - 1.0) > 1e-6)
        throw std::runtime_error("js_divergence: inputs must lie on the simplex");
    double js = 0.0;
    for (int i = 0; i < k; ++i) {
        double m = 0.5 * (p[i] + q[i]);
        if (p[i] > 0.0) js += 0.5 * p[i] * std::log(p[i] / m);
        if (q[i] > 0.0) js += 0.5 * q[i] * std::log(q[i] / m);
    }
    return std::max(0.0, js);
}

double js_divergence(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw std::runtime_error("js_divergence: dimension mismatch");
    return js_divergence(p.data(), q.data(), static_cast<int>(p.size()));
}

double pearson(const double* x, const double* y, int n) {
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

// Hungarian algorithm (potentials form), O(k^3), maximizing.
std::vector<int> max_weight_assignment(const Mat& score) {
    const int n = score.rows;
    if (score.cols != n) throw std::runtime_error("max_weight_assignment: square matrix required");
    const double kInf = 1e300;
    // Minimize the negated scores; 1-based arrays per the classic formulation.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = -score(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> match(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] > 0) match[p[j] - 1] = j - 1;
    return match;
}

std::vector<int> align_communities(const Mat& est, const Mat& truth) {
    if (est.cols != truth.cols || est.rows != truth.rows)
        throw std::runtime_error("align_communities: shape mismatch");
    const int k = est.cols, n = est.rows;
    Mat corr(k, k);
    std::vector<double> ecol(n), tcol(n);
    for (int a = 0; a < k; ++a) {
        for (int i = 0; i < n; ++i) ecol[i] = est(i, a);
        for (int b = 0; b < k; ++b) {
            for (int i = 0; i < n; ++i) tcol[i] = truth(i, b);
            corr(a, b) = pearson(ecol.data(), tcol.data(), n);
        }
    }
    return max_weight_assignment(corr);
}

std::vector<CommunityProfile> community_profiles(const Mat& W, const Mat& memberships, const Mat& block_mean,
                                                 int top_n) {
    const int m = W.rows, k = W.cols, n = memberships.rows;
    if (memberships.cols != k || block_mean.rows != k || block_mean.cols != k)
        throw std::runtime_error("community_profiles: dimension mismatch");
    std::vector<CommunityProfile> out(k);
    for (int l = 0; l < k; ++l) {
        CommunityProfile& prof = out[l];
        prof.community = l;
        std::vector<std::pair<int, double>> cov(m), mem(n);
        for (int j = 0; j < m; ++j) cov[j] = {j, W(j, l)};
        for (int i = 0; i < n; ++i) mem[i] = {i, memberships(i, l)};
        auto by_weight = [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        };
        std::sort(cov.begin(), cov.end(), by_weight);
        std::sort(mem.begin(), mem.end(), by_weight);
        int nc = std::min<int>(top_n, m), nm = std::min<int>(top_n, n);
        prof.top_covariates.assign(cov.begin(), cov.begin() + nc);
        prof.top_members.assign(mem.begin(), mem.begin() + nm);
        prof.block_row.resize(k);
        prof.block_col.resize(k);
        for (int b = 0; b < k; ++b) {
            prof.block_row[b] = block_mean(l, b);
            prof.block_col[b] = block_mean(b, l);
        }
    }
    return out;
}

void save_profiles(const std::string& path, const std::vector<CommunityProfile>& profiles) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    for (auto& prof : profiles) {
        f << "community=" << prof.community << "\n";
        for (auto& [j, w] : prof.top_covariates) f << "covariate=" << j << "," << io::fmt_double(w) << "\n";
        for (auto& [i, s] : prof.top_members) f << "member=" << i << "," << io::fmt_double(s) << "\n";
        f << "block_row=";
        for (size_t b = 0; b < prof.block_row.size(); ++b) f << (b ? "," : "") << io::fmt_double(prof.block_row[b]);
        f << "\nblock_col=";
        for (size_t b = 0; b < prof.block_col.size(); ++b) f << (b ? "," : "") << io::fmt_double(prof.block_col[b]);
        f << "\n";
    }
}

double mann_kendall_pvalue(const std::vector<double>& series) {
    const int n = static_cast<int>(series.size());
    if (n < 3) throw std::runtime_error("mann_kendall_pvalue: need at least 3 points");
    long long s = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double d = series[j] - series[i];
            s += (d > 0.0) - (d < 0.0);
        }
    // Tie correction over tied groups of values.
    std::vector<double> sorted(series);
    std::sort(sorted.begin(), sorted.end());
    double var = static_cast<double>(n) * (n - 1) * (2.0 * n + 5.0) / 18.0;
    size_t i = 0;
    while (i < sorted.size()) {
        size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        double t = static_cast<double>(j - i);
        if (t > 1.0) var -= t * (t - 1.0) * (2.0 * t + 5.0) / 18.0;
        i = j;
    }
    if (var <= 0.0) return 1.0;
    double z;
    if (s > 0)
        z = (static_cast<double>(s) - 1.0) / std::sqrt(var);
    else if (s < 0)
        z = (static_cast<double>(s) + 1.0) / std::sqrt(var);
    else
        z = 0.0;
    return 1.0 - normal_cdf(z);
}

double linear_fit_r2(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3) throw std::runtime_error("linear_fit_r2: need >= 3 points");
    double r = pearson(x.data(), y.data(), static_cast<int>(x.size()));
    return r * r;
}

}  // namespace rbnet
