#include "rbnet/rbm_onehot.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rbnet/io.hpp"
#include "rbnet/special.hpp"

namespace rbnet {

// ln Psi = logsumexp_l [ v_l + sum_j f(W_jl + u_j) ] where f is softplus in
// binary mode and the truncated-exponential log-normalizer in continuous mode.
double log_partition(const RbmParams& p) {
    const int m = p.m(), k = p.k();
    std::vector<double> per_comm(k);
#pragma omp parallel for schedule(static) if (m * k > 8192)
    for (int l = 0; l < k; ++l) {
        double s = p.v[l];
        for (int j = 0; j < m; ++j) {
            double a = p.W(j, l) + p.u[j];
            s += (p.mode == CovariateMode::binary) ? softplus(a) : trunc_exp_log_norm(a);
        }
        per_comm[l] = s;
    }
    return log_sum_exp(per_comm.data(), k);
}

std::vector<double> cond_y_given_z(const RbmParams& p, int community) {
    const int m = p.m();
    std::vector<double> out(m);
    for (int j = 0; j < m; ++j) {
        double a = p.W(j, community) + p.u[j];
        out[j] = (p.mode == CovariateMode::binary) ? sigmoid(a) : a;
    }
    return out;
}

std::vector<double> cond_z_given_y(const RbmParams& p, const std::vector<std::pair<int, double>>& y) {
    const int k = p.k();
    std::vector<double> logits(p.v);
    for (auto& [j, val] : y) {
        const double* wrow = p.W.row(j);
        for (int l = 0; l < k; ++l) logits[l] += val * wrow[l];
    }
    softmax_inplace(logits.data(), k);
    return logits;
}

std::vector<double> cond_z_given_y_dense(const RbmParams& p, const std::vector<double>& y) {
    const int k = p.k();
    std::vector<double> logits(p.v);
    for (int j = 0; j < p.m(); ++j) {
        if (y[j] == 0.0) continue;
        const double* wrow = p.W.row(j);
        for (int l = 0; l < k; ++l) logits[l] += y[j] * wrow[l];
    }
    softmax_inplace(logits.data(), k);
    return logits;
}

RbmMoments exact_moments(const RbmParams& p) {
    if (p.mode != CovariateMode::binary)
        throw std::runtime_error("exact_moments: continuous mode uses Gibbs moments only");
    const int m = p.m(), k = p.k();
    const double ln_psi = log_partition(p);
    RbmMoments mo;
    mo.eyz = Mat(m, k);
    mo.ez.assign(k, 0.0);
    mo.ey.assign(m, 0.0);
    for (int l = 0; l < k; ++l) {
        double s = p.v[l];
        for (int j = 0; j < m; ++j) s += softplus(p.W(j, l) + p.u[j]);
        mo.ez[l] = std::exp(s - ln_psi);
    }
#pragma omp parallel for schedule(static) if (m * k > 8192)
    for (int j = 0; j < m; ++j) {
        double ey = 0.0;
        for (int l = 0; l < k; ++l) {
            double e = sigmoid(p.W(j, l) + p.u[j]) * mo.ez[l];
            mo.eyz(j, l) = e;
            ey += e;
        }
        mo.ey[j] = ey;
    }
    return mo;
}

OneHotGibbs::OneHotGibbs(int chains, int m, std::uint64_t seed) {
    if (chains < 1) throw std::runtime_error("OneHotGibbs: chains must be >= 1");
    y_.assign(chains, std::vector<double>(m, 0.0));
    z_.assign(chains, 0);
    rng_.reserve(chains);
    for (int c = 0; c < chains; ++c) {
        rng_.push_back(Rng::stream(seed, "gibbs", static_cast<std::uint64_t>(c)));
        z_[c] = rng_.back().uniform_int(1 << 16);  // placeholder until first sweep
    }
    sum_yz_.assign(chains, Mat());
    sum_z_.assign(chains, {});
    sum_y_.assign(chains, {});
}

void OneHotGibbs::sweep(const RbmParams& p, int c) {
    Rng& rng = rng_[c];
    const int m = p.m(), k = p.k();
    if (z_[c] >= k) z_[c] = z_[c] % k;
    // y | z
    const int l = z_[c];
    for (int j = 0; j < m; ++j) {
        double a = p.W(j, l) + p.u[j];
        if (p.mode == CovariateMode::binary)
            y_[c][j] = rng.bernoulli(sigmoid(a)) ? 1.0 : 0.0;
        else
            y_[c][j] = trunc_exp_sample(a, rng.uniform_pos());
    }
    // z | y
    std::vector<double> logits(p.v);
    for (int j = 0; j < m; ++j) {
        if (y_[c][j] == 0.0) continue;
        const double* wrow = p.W.row(j);
        for (int t = 0; t < k; ++t) logits[t] += y_[c][j] * wrow[t];
    }
    softmax_inplace(logits.data(), k);
    z_[c] = rng.categorical(logits.data(), k);
}

void OneHotGibbs::burn_in(const RbmParams& p, int sweeps) {
    const int n_chains = chains();
#pragma omp parallel for schedule(static)
    for (int c = 0; c < n_chains; ++c)
        for (int s = 0; s < sweeps; ++s) sweep(p, c);
}

void OneHotGibbs::step_and_collect(const RbmParams& p, int thin) {
    const int n_chains = chains();
    const int m = p.m(), k = p.k();
#pragma omp parallel for schedule(static)
    for (int c = 0; c < n_chains; ++c) {
        if (sum_yz_[c].rows != m || sum_yz_[c].cols != k) {
            sum_yz_[c] = Mat(m, k);
            sum_z_[c].assign(k, 0.0);
            sum_y_[c].assign(m, 0.0);
        }
        for (int s = 0; s < thin; ++s) sweep(p, c);
        const int l = z_[c];
        sum_z_[c][l] += 1.0;
        for (int j = 0; j < m; ++j) {
            double yj = y_[c][j];
            if (yj == 0.0) continue;
            sum_y_[c][j] += yj;
            sum_yz_[c](j, l) += yj;
        }
    }
    ++samples_per_chain_;
}

void OneHotGibbs::reset_samples() {
    for (auto& s : sum_yz_) s = Mat();
    samples_per_chain_ = 0;
}

RbmMoments OneHotGibbs::moments(const RbmParams& p) const {
    const int m = p.m(), k = p.k();
    const int C = chains();
    if (samples_per_chain_ == 0) throw std::runtime_error("OneHotGibbs::moments: no samples collected");
    RbmMoments mo;
    mo.eyz = Mat(m, k);
    mo.ez.assign(k, 0.0);
    mo.ey.assign(m, 0.0);
    mo.eyz_se = Mat(m, k);
    mo.ez_se.assign(k, 0.0);
    mo.ey_se.assign(m, 0.0);
    const double inv_s = 1.0 / static_cast<double>(samples_per_chain_);
    // Mean of per-chain means; spread across chains gives the standard error.
    for (int c = 0; c < C; ++c) {
        for (int l = 0; l < k; ++l) mo.ez[l] += sum_z_[c][l] * inv_s;
        for (int j = 0; j < m; ++j) mo.ey[j] += sum_y_[c][j] * inv_s;
        for (size_t t = 0; t < mo.eyz.data.size(); ++t) mo.eyz.data[t] += sum_yz_[c].data[t] * inv_s;
    }
    for (auto& v : mo.ez) v /= C;
    for (auto& v : mo.ey) v /= C;
    for (auto& v : mo.eyz.data) v /= C;
    if (C > 1) {
        for (int c = 0; c < C; ++c) {
            for (int l = 0; l < k; ++l) {
                double d = sum_z_[c][l] * inv_s - mo.ez[l];
                mo.ez_se[l] += d * d;
            }
            for (int j = 0; j < m; ++j) {
                double d = sum_y_[c][j] * inv_s - mo.ey[j];
                mo.ey_se[j] += d * d;
            }
            for (size_t t = 0; t < mo.eyz.data.size(); ++t) {
                double d = sum_yz_[c].data[t] * inv_s - mo.eyz.data[t];
                mo.eyz_se.data[t] += d * d;
            }
        }
        const double norm = 1.0 / (static_cast<double>(C) * (C - 1));
        for (auto& v : mo.ez_se) v = std::sqrt(v * norm);
        for (auto& v : mo.ey_se) v = std::sqrt(v * norm);
        for (auto& v : mo.eyz_se.data) v = std::sqrt(v * norm);
    }
    return mo;
}

std::vector<YzSample> gibbs_sample(const RbmParams& p, int chains, int thin, int steps, std::uint64_t seed) {
    if (thin < 1) throw std::runtime_error("gibbs_sample: thin must be >= 1");
    OneHotGibbs sampler(chains, p.m(), seed);
    sampler.burn_in(p, 100);
    std::vector<YzSample> out;
    out.reserve(static_cast<size_t>(chains) * steps);
    for (int s = 0; s < steps; ++s) {
        sampler.step_and_collect(p, thin);
        for (int c = 0; c < chains; ++c) out.push_back({sampler.chain_y(c), sampler.chain_z(c)});
    }
    return out;
}

RbmParams init_rbm_params(const AttributedNetwork& net, int k, Rng& rng, CovariateMode mode) {
    RbmParams p;
    p.mode = mode;
    p.W = Mat(net.m, k);
    for (auto& w : p.W.data) w = (rng.uniform() * 2.0 - 1.0) * 0.01;
    p.u.assign(net.m, 0.0);
    std::vector<double> col_mean(net.m, 0.0);
    for (int i = 0; i < net.n; ++i)
        for (auto& [j, val] : net.y_rows[i]) col_mean[j] += val;
    for (int j = 0; j < net.m; ++j) {
        double mean = net.n > 0 ? col_mean[j] / net.n : 0.5;
        p.u[j] = logit(std::clamp(mean, 0.01, 0.99));
    }
    p.v.assign(k, 0.0);
    return p;
}

void save_rbm_params(const std::string& path, const RbmParams& p, const std::string& kind) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "format=rbnet-params-v1\n";
    f << "kind=" << kind << "\n";
    f << "mode=" << (p.mode == CovariateMode::binary ? "binary" : "continuous") << "\n";
    f << "m=" << p.m() << "\n";
    f << "k=" << p.k() << "\n";
    for (int j = 0; j < p.m(); ++j) {
        f << "W=";
        for (int l = 0; l < p.k(); ++l) f << (l ? "," : "") << io::fmt_double(p.W(j, l));
        f << "\n";
    }
    f << "u=";
    for (int j = 0; j < p.m(); ++j) f << (j ? "," : "") << io::fmt_double(p.u[j]);
    f << "\nv=";
    for (int l = 0; l < p.k(); ++l) f << (l ? "," : "") << io::fmt_double(p.v[l]);
    f << "\n";
}

static std::vector<double> parse_csv_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

RbmParams load_rbm_params(const std::string& path, std::string* kind_out) {
    RbmParams p;
    int m = -1, k = -1, wrow = 0;
    for (auto& [key, val] : io::read_kv(path)) {
        if (key == "format") {
            if (val != "rbnet-params-v1") throw std::runtime_error("unknown params format: " + val);
        } else if (key == "kind") {
            if (kind_out) *kind_out = val;
        } else if (key == "mode") {
            p.mode = (val == "binary") ? CovariateMode::binary : CovariateMode::continuous;
        } else if (key == "m") {
            m = std::stoi(val);
        } else if (key == "k") {
            k = std::stoi(val);
            p.W = Mat(m, k);
        } else if (key == "W") {
            auto row = parse_csv_doubles(val);
            if (static_cast<int>(row.size()) != k) throw std::runtime_error("params bundle: bad W row width");
            for (int l = 0; l < k; ++l) p.W(wrow, l) = row[l];
            ++wrow;
        } else if (key == "u") {
            p.u = parse_csv_doubles(val);
        } else if (key == "v") {
            p.v = parse_csv_doubles(val);
        }
    }
    if (m < 0 || k < 0 || wrow != m || static_cast<int>(p.u.size()) != m || static_cast<int>(p.v.size()) != k)
        throw std::runtime_error("params bundle incomplete: " + path);
    return p;
}

}  // namespace rbnet
