// Command-line front end: generate / fit / predict-links / explain /
// select-k / eval / encode-lazega. Every subcommand is deterministic given
// (inputs, config, seed); wall-clock times go only to timing.log.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rbnet/eval.hpp"
#include "rbnet/generator.hpp"
#include "rbnet/infer_rbmmsbm.hpp"
#include "rbnet/infer_rbsbm.hpp"
#include "rbnet/io.hpp"
#include "rbnet/network.hpp"

using namespace rbnet;

namespace {

struct CommonOpts {
    std::string config_file;
    std::string edges, covariates, labels, out = "rbnet_out";
    std::string model = "rbsbm";
    std::string mode = "binary";
    std::string gradient_mode = "gibbs";
    int k = 0;
    int tau = 1000;
    int batch = -1;
    int xi = 1;
    double lr = -1.0;
    double e_lr = -1.0;
    int chains = 100;
    int thin = 10;
    int burnin = 100;
    std::uint64_t seed = 0;
    double mask_fraction = 0.0;
    int threads = 0;
    int binarize_bins = 0;
    double prior_alpha = 1.0, prior_beta_diag = 1.0, prior_beta_offdiag = 10.0;
    bool no_anneal = false;
    bool warm_start = false;
    double lambda0 = 0.3;
    int elbo_every = 1;
    bool early_stop = false;
    int top_n = 10;
    int max_n = 3000;
    long long omega_samples = 20000;
};

void add_common_fit_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--config", o.config_file, "key = value file; explicit flags win");
    cmd->add_option("--edges", o.edges, "edge list TSV (src\\tdst per line)");
    cmd->add_option("--covariates", o.covariates, "covariate CSV with header row");
    cmd->add_option("--labels", o.labels, "optional ground-truth label file");
    cmd->add_option("--model", o.model, "rbsbm | rbmmsbm")->check(CLI::IsMember({"rbsbm", "rbmmsbm"}));
    cmd->add_option("--mode", o.mode, "binary | continuous")->check(CLI::IsMember({"binary", "continuous"}));
    cmd->add_option("--k", o.k, "number of communities");
    cmd->add_option("--tau", o.tau, "EM iterations");
    cmd->add_option("--batch", o.batch, "node updates per E-step (default min(n,256))");
    cmd->add_option("--xi", o.xi, "gradient steps per M-step");
    cmd->add_option("--lr", o.lr, "learning rate (default 1/n)");
    cmd->add_option("--e-lr", o.e_lr, "E-step learning rate for rbmmsbm (default 1/n)");
    cmd->add_option("--gradient-mode", o.gradient_mode, "exact | gibbs")->check(CLI::IsMember({"exact", "gibbs"}));
    cmd->add_option("--chains", o.chains, "persistent Gibbs chains");
    cmd->add_option("--thin", o.thin, "accept every thin-th Gibbs sample");
    cmd->add_option("--burnin", o.burnin, "Gibbs burn-in sweeps");
    cmd->add_option("--seed", o.seed, "64-bit seed");
    cmd->add_option("--binarize-bins", o.binarize_bins, "one-hot bin continuous covariates into this many bins");
    cmd->add_option("--prior-alpha", o.prior_alpha, "Beta prior alpha (all entries)");
    cmd->add_option("--prior-beta-diag", o.prior_beta_diag, "Beta prior beta, diagonal");
    cmd->add_option("--prior-beta-offdiag", o.prior_beta_offdiag, "Beta prior beta, off-diagonal");
    cmd->add_flag("--no-anneal", o.no_anneal, "disable the annealing transform");
    cmd->add_flag("--warm-start", o.warm_start, "seed the rbmmsbm fit from a short rbsbm fit");
    cmd->add_option("--lambda0", o.lambda0, "initial annealing exponent");
    cmd->add_option("--elbo-every", o.elbo_every, "ELBO trace stride (0 disables)");
    cmd->add_flag("--early-stop", o.early_stop, "stop when ELBO stalls");
    cmd->add_option("--max-n", o.max_n, "rbmmsbm node-count guard");
    cmd->add_option("--omega-samples", o.omega_samples, "samples for the log-normalizer estimate");
    cmd->add_option("--threads", o.threads, "worker thread cap");
    cmd->add_option("--out", o.out, "output directory");
}

// Precedence: built-in defaults < config file < explicit flags.
void apply_config(CLI::App* cmd, CommonOpts& o) {
    if (o.config_file.empty()) return;
    auto given = [&](const std::string& flag) {
        auto* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    };
    for (auto& [key, val] : io::read_kv(o.config_file)) {
        const std::string flag = "--" + key;
        if (given(flag)) continue;
        if (key == "edges") o.edges = val;
        else if (key == "covariates") o.covariates = val;
        else if (key == "labels") o.labels = val;
        else if (key == "out") o.out = val;
        else if (key == "model") o.model = val;
        else if (key == "mode") o.mode = val;
        else if (key == "gradient-mode") o.gradient_mode = val;
        else if (key == "k") o.k = std::stoi(val);
        else if (key == "tau") o.tau = std::stoi(val);
        else if (key == "batch") o.batch = std::stoi(val);
        else if (key == "xi") o.xi = std::stoi(val);
        else if (key == "lr") o.lr = std::stod(val);
        else if (key == "e-lr") o.e_lr = std::stod(val);
        else if (key == "chains") o.chains = std::stoi(val);
        else if (key == "thin") o.thin = std::stoi(val);
        else if (key == "burnin") o.burnin = std::stoi(val);
        else if (key == "seed") o.seed = std::stoull(val);
        else if (key == "mask-fraction") o.mask_fraction = std::stod(val);
        else if (key == "threads") o.threads = std::stoi(val);
        else if (key == "binarize-bins") o.binarize_bins = std::stoi(val);
        else if (key == "prior-alpha") o.prior_alpha = std::stod(val);
        else if (key == "prior-beta-diag") o.prior_beta_diag = std::stod(val);
        else if (key == "prior-beta-offdiag") o.prior_beta_offdiag = std::stod(val);
        else if (key == "no-anneal") o.no_anneal = val == "true" || val == "1";
        else if (key == "warm-start") o.warm_start = val == "true" || val == "1";
        else if (key == "lambda0") o.lambda0 = std::stod(val);
        else if (key == "elbo-every") o.elbo_every = std::stoi(val);
        else if (key == "early-stop") o.early_stop = val == "true" || val == "1";
        else if (key == "max-n") o.max_n = std::stoi(val);
        else if (key == "omega-samples") o.omega_samples = std::stoll(val);
        else throw std::runtime_error("config: unknown key '" + key + "'");
    }
    if (o.edges.empty() || o.covariates.empty())
        throw std::runtime_error("missing --edges/--covariates (flag or config)");
    if (o.k <= 0 && cmd->get_name() != "select-k") throw std::runtime_error("missing --k (flag or config)");
}

void apply_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

AttributedNetwork load_input(const CommonOpts& o) {
    CovariateMode mode = o.mode == "binary" ? CovariateMode::binary : CovariateMode::continuous;
    auto net = load_network(o.edges, o.covariates, mode, Directedness::directed);
    if (o.binarize_bins > 0) net = binarize_covariates(net, o.binarize_bins);
    if (!o.labels.empty()) {
        net.labels = load_labels(o.labels);
        net.validate();
    }
    net.build_column_index();
    return net;
}

io::KvList base_manifest(const CommonOpts& o, const AttributedNetwork& net) {
    io::KvList kv;
    kv.emplace_back("model", o.model);
    kv.emplace_back("mode", o.mode);
    kv.emplace_back("n", std::to_string(net.n));
    kv.emplace_back("edges", std::to_string(net.num_edges()));
    kv.emplace_back("m", std::to_string(net.m));
    kv.emplace_back("k", std::to_string(o.k));
    kv.emplace_back("tau", std::to_string(o.tau));
    kv.emplace_back("batch", std::to_string(o.batch));
    kv.emplace_back("xi", std::to_string(o.xi));
    kv.emplace_back("lr", io::fmt_double(o.lr));
    kv.emplace_back("gradient_mode", o.gradient_mode);
    kv.emplace_back("chains", std::to_string(o.chains));
    kv.emplace_back("thin", std::to_string(o.thin));
    kv.emplace_back("seed", std::to_string(o.seed));
    kv.emplace_back("mask_fraction", io::fmt_double(o.mask_fraction));
    return kv;
}

void write_labels_csv(const std::string& path, const std::vector<int>& labels) {
    std::vector<std::string> lines;
    lines.reserve(labels.size());
    for (int l : labels) lines.push_back(std::to_string(l));
    io::write_lines(path, lines);
}

void write_trace_csv(const std::string& path, const std::vector<double>& trace) {
    std::vector<std::string> lines;
    lines.reserve(trace.size());
    for (double v : trace) lines.push_back(io::fmt_double(v));
    io::write_lines(path, lines);
}

void write_timing_log(const std::string& path, const std::vector<double>& iter_seconds) {
    std::vector<std::string> lines;
    double total = 0.0;
    for (double s : iter_seconds) total += s;
    lines.push_back("# per-iteration E+M wall time (seconds)");
    lines.push_back("total=" + io::fmt_double(total));
    lines.push_back("mean=" + io::fmt_double(iter_seconds.empty() ? 0.0 : total / iter_seconds.size()));
    for (double s : iter_seconds) lines.push_back(io::fmt_double(s));
    io::write_lines(path, lines);
}

FitOptions make_fit_options(const CommonOpts& o, const std::vector<Edge>& mask = {}) {
    FitOptions fo;
    fo.k = o.k;
    fo.tau = o.tau;
    fo.batch = o.batch;
    fo.xi = o.xi;
    fo.epsilon = o.lr;
    fo.gradient_mode = o.gradient_mode == "exact" ? GradientMode::exact : GradientMode::gibbs;
    fo.chains = o.chains;
    fo.thin = o.thin;
    fo.burnin = o.burnin;
    fo.seed = o.seed;
    fo.mask = mask;
    fo.anneal = !o.no_anneal;
    fo.lambda0 = o.lambda0;
    fo.early_stop = o.early_stop;
    fo.elbo_every = o.elbo_every;
    fo.prior = BlockPrior::constant(o.k, o.prior_alpha, o.prior_beta_diag, o.prior_beta_offdiag);
    return fo;
}

MmFitOptions make_mm_options(const CommonOpts& o) {
    MmFitOptions mo;
    mo.k = o.k;
    mo.tau = o.tau;
    mo.xi = o.xi;
    mo.epsilon = o.lr;
    mo.e_epsilon = o.e_lr;
    mo.chains = o.chains;
    mo.thin = o.thin;
    mo.burnin = o.burnin;
    mo.seed = o.seed;
    mo.max_n = o.max_n;
    mo.omega_samples = o.omega_samples;
    mo.elbo_every = o.elbo_every;
    mo.warm_start = o.warm_start;
    mo.prior = BlockPrior::constant(o.k, o.prior_alpha, o.prior_beta_diag, o.prior_beta_offdiag);
    return mo;
}

int cmd_generate(int n, const std::string& kind, int m, int k, std::uint64_t seed, const std::string& out,
                 int threads) {
    apply_threads(threads);
    SynthKind sk = kind == "mixed" ? SynthKind::mixed : SynthKind::pure;
    auto cfg = synth_config(n, sk, seed, m, k);
    GeneratedNetwork g = sk == SynthKind::pure ? generate_rbsbm(cfg, seed) : generate_rbmmsbm(cfg, seed);
    io::ensure_dir(out);
    save_network(g.net, out + "/edges.tsv", out + "/covariates.csv",
                 sk == SynthKind::pure ? out + "/labels.txt" : "",
                 sk == SynthKind::mixed ? out + "/mm_labels.csv" : "");
    save_ground_truth(out + "/truth", g.truth);
    double density = static_cast<double>(g.net.num_edges()) / (static_cast<double>(g.net.n) * (g.net.n - 1));
    io::KvList kv;
    kv.emplace_back("kind", kind);
    kv.emplace_back("n", std::to_string(g.net.n));
    kv.emplace_back("m", std::to_string(g.net.m));
    kv.emplace_back("k", std::to_string(cfg.k));
    kv.emplace_back("edges", std::to_string(g.net.num_edges()));
    kv.emplace_back("density", io::fmt_double(density));
    kv.emplace_back("seed", std::to_string(seed));
    io::write_kv(out + "/manifest.txt", kv);
    std::printf("generated %s network: n=%d |E|=%d density=%.6f k=%d m=%d\n", kind.c_str(), g.net.n,
                g.net.num_edges(), density, cfg.k, g.net.m);
    return 0;
}

int cmd_fit(const CommonOpts& o) {
    apply_threads(o.threads);
    auto net = load_input(o);
    io::ensure_dir(o.out);
    io::KvList kv = base_manifest(o, net);

    if (o.model == "rbsbm") {
        auto [state, report] = fit(net, make_fit_options(o));
        io::write_matrix_csv(o.out + "/memberships.csv", state.q);
        io::write_matrix_csv(o.out + "/block_mean.csv", report.block_mean);
        write_labels_csv(o.out + "/labels.csv", report.labels);
        write_trace_csv(o.out + "/elbo_trace.csv", report.elbo_trace);
        save_rbm_params(o.out + "/params.txt", state.rbm, "onehot");
        write_timing_log(o.out + "/timing.log", report.iter_seconds);
        kv.emplace_back("iterations", std::to_string(report.iterations));
        if (!report.elbo_trace.empty()) kv.emplace_back("final_elbo", io::fmt_double(report.elbo_trace.back()));
        if (!net.labels.empty()) {
            double score = nmi(report.labels, net.labels);
            kv.emplace_back("nmi", io::fmt_double(score));
            std::printf("nmi=%.6f\n", score);
        }
        if (!report.nmi_trace.empty()) write_trace_csv(o.out + "/nmi_trace.csv", report.nmi_trace);
    } else {
        auto [state, report] = fit_mm(net, make_mm_options(o));
        io::write_matrix_csv(o.out + "/memberships.csv", report.memberships);
        io::write_matrix_csv(o.out + "/block_mean.csv", report.block_mean);
        write_labels_csv(o.out + "/labels.csv", report.labels);
        write_trace_csv(o.out + "/elbo_trace.csv", report.elbo_trace);
        RbmParams p;
        p.W = state.rbm.W;
        p.u = state.rbm.u;
        p.v = state.rbm.v;
        save_rbm_params(o.out + "/params.txt", p, "simplex");
        write_timing_log(o.out + "/timing.log", report.iter_seconds);
        kv.emplace_back("iterations", std::to_string(report.iterations));
        kv.emplace_back("log_omega", io::fmt_double(state.log_omega));
        kv.emplace_back("log_omega_se", io::fmt_double(state.log_omega_se));
        if (!report.elbo_trace.empty()) kv.emplace_back("final_elbo", io::fmt_double(report.elbo_trace.back()));
        if (!net.labels.empty()) {
            double score = nmi(report.labels, net.labels);
            kv.emplace_back("nmi", io::fmt_double(score));
            std::printf("nmi=%.6f\n", score);
        }
    }
    io::write_kv(o.out + "/manifest.txt", kv);
    return 0;
}

int cmd_predict_links(const CommonOpts& o) {
    apply_threads(o.threads);
    if (o.model != "rbsbm") throw std::runtime_error("predict-links supports the rbsbm model");
    auto net = load_input(o);
    if (!(o.mask_fraction > 0.0)) throw std::runtime_error("predict-links needs --mask-fraction in (0,1)");
    auto split = make_link_split(net, o.mask_fraction, o.seed);
    io::ensure_dir(o.out);
    save_split(o.out + "/split.txt", split);
    split.observed.build_column_index();
    auto [state, report] = fit(split.observed, make_fit_options(o, split.mask));
    auto pred = predict_links(state, split);

    std::vector<std::string> lines;
    lines.push_back("src,dst,score,is_positive");
    for (size_t i = 0; i < pred.pairs.size(); ++i)
        lines.push_back(std::to_string(pred.pairs[i].first) + "," + std::to_string(pred.pairs[i].second) + "," +
                        io::fmt_double(pred.scores[i]) + "," + std::to_string(pred.is_positive[i]));
    io::write_lines(o.out + "/scores.csv", lines);
    io::write_matrix_csv(o.out + "/memberships.csv", state.q);
    io::write_matrix_csv(o.out + "/block_mean.csv", report.block_mean);
    save_rbm_params(o.out + "/params.txt", state.rbm, "onehot");
    write_timing_log(o.out + "/timing.log", report.iter_seconds);
    io::KvList kv = base_manifest(o, net);
    kv.emplace_back("heldout_pos", std::to_string(split.heldout_pos.size()));
    kv.emplace_back("heldout_neg", std::to_string(split.heldout_neg.size()));
    kv.emplace_back("auc", io::fmt_double(pred.auc));
    io::write_kv(o.out + "/manifest.txt", kv);
    std::printf("auc=%.6f\n", pred.auc);
    return 0;
}

int cmd_explain(const std::string& fit_dir, int top_n, const std::string& out, int threads) {
    apply_threads(threads);
    if (!io::file_exists(fit_dir + "/params.txt"))
        throw std::runtime_error("explain: no fitted parameter bundle at " + fit_dir + "/params.txt");
    RbmParams params = load_rbm_params(fit_dir + "/params.txt");
    Mat memberships = io::read_matrix_csv(fit_dir + "/memberships.csv", false);
    Mat block_mean = io::read_matrix_csv(fit_dir + "/block_mean.csv", false);
    auto profiles = community_profiles(params.W, memberships, block_mean, top_n);
    io::ensure_dir(out);
    save_profiles(out + "/profiles.txt", profiles);
    io::KvList kv;
    kv.emplace_back("communities", std::to_string(profiles.size()));
    kv.emplace_back("top_n", std::to_string(top_n));
    io::write_kv(out + "/manifest.txt", kv);
    std::printf("wrote %zu community profiles\n", profiles.size());
    return 0;
}

int cmd_select_k(const CommonOpts& o, const std::string& k_range) {
    apply_threads(o.threads);
    auto net = load_input(o);
    auto colon = k_range.find(':');
    if (colon == std::string::npos) throw std::runtime_error("--k-range must be lo:hi");
    int lo = std::stoi(k_range.substr(0, colon));
    int hi = std::stoi(k_range.substr(colon + 1));
    if (lo < 2 || hi < lo) throw std::runtime_error("--k-range must satisfy 2 <= lo <= hi");
    std::vector<int> ks;
    for (int k = lo; k <= hi; ++k) ks.push_back(k);
    CommonOpts oo = o;
    oo.k = lo;
    auto res = select_k(net, ks, make_mm_options(oo));
    io::ensure_dir(o.out);
    std::vector<std::string> lines;
    lines.push_back("k,elbo_with_log_omega,elbo_without_log_omega,log_omega,log_omega_se");
    for (auto& row : res.table)
        lines.push_back(std::to_string(row.k) + "," + io::fmt_double(row.elbo_with_omega) + "," +
                        io::fmt_double(row.elbo_without_omega) + "," + io::fmt_double(row.log_omega) + "," +
                        io::fmt_double(row.log_omega_se));
    io::write_lines(o.out + "/k_selection.csv", lines);
    io::KvList kv = base_manifest(o, net);
    kv.emplace_back("k_range", k_range);
    kv.emplace_back("chosen_k", std::to_string(res.chosen_k));
    io::write_kv(o.out + "/manifest.txt", kv);
    std::printf("chosen_k=%d\n", res.chosen_k);
    return 0;
}

int cmd_eval(const std::string& labels_a, const std::string& labels_b, const std::string& mm_est,
             const std::string& mm_truth, const std::string& out) {
    io::KvList kv;
    if (!labels_a.empty() && !labels_b.empty()) {
        double score = nmi(load_labels(labels_a), load_labels(labels_b));
        kv.emplace_back("nmi", io::fmt_double(score));
        std::printf("nmi=%.6f\n", score);
    }
    if (!mm_est.empty() && !mm_truth.empty()) {
        Mat est = io::read_matrix_csv(mm_est, false);
        Mat truth = io::read_matrix_csv(mm_truth, false);
        if (!est.same_shape(truth)) throw std::runtime_error("eval: membership matrices differ in shape");
        auto perm = align_communities(est, truth);
        double mean_js = 0.0;
        std::vector<double> p(est.cols), q(est.cols);
        for (int i = 0; i < est.rows; ++i) {
            for (int l = 0; l < est.cols; ++l) {
                p[l] = est(i, l);
                q[l] = truth(i, perm[l]);
            }
            mean_js += js_divergence(p, q);
        }
        mean_js /= est.rows;
        kv.emplace_back("mean_js", io::fmt_double(mean_js));
        std::printf("mean_js=%.6f\n", mean_js);
    }
    if (kv.empty()) throw std::runtime_error("eval: provide --labels-a/--labels-b or --mm-est/--mm-truth");
    if (!out.empty()) {
        io::ensure_dir(out);
        io::write_kv(out + "/eval.txt", kv);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RB-SBM / RB-MMSBM: generative models for networks with node covariates"};
    app.require_subcommand(1);

    CommonOpts o;

    // generate
    auto* gen = app.add_subcommand("generate", "sample a synthetic attributed network");
    int gen_n = 0, gen_m = -1, gen_k = -1, gen_threads = 0;
    std::string gen_kind = "pure", gen_out = "rbnet_out";
    std::uint64_t gen_seed = 0;
    gen->add_option("--n", gen_n, "node count")->required();
    gen->add_option("--kind", gen_kind, "pure | mixed")->check(CLI::IsMember({"pure", "mixed"}));
    gen->add_option("--m", gen_m, "covariate count (default 100)");
    gen->add_option("--k", gen_k, "community count (default floor(log2 n))");
    gen->add_option("--seed", gen_seed, "64-bit seed");
    gen->add_option("--out", gen_out, "output directory");
    gen->add_option("--threads", gen_threads, "worker thread cap");

    auto* fit_cmd = app.add_subcommand("fit", "variational EM fit");
    add_common_fit_flags(fit_cmd, o);

    auto* pred = app.add_subcommand("predict-links", "hold out pairs, fit, and score them");
    add_common_fit_flags(pred, o);
    pred->add_option("--mask-fraction", o.mask_fraction, "fraction of edges to hold out")->required();

    auto* expl = app.add_subcommand("explain", "salient covariates and members per community");
    std::string expl_fit_dir, expl_out = "rbnet_out";
    int expl_top_n = 10, expl_threads = 0;
    expl->add_option("--fit-dir", expl_fit_dir, "directory produced by fit")->required();
    expl->add_option("--top-n", expl_top_n, "entries per ranking");
    expl->add_option("--out", expl_out, "output directory");
    expl->add_option("--threads", expl_threads, "worker thread cap");

    auto* sel = app.add_subcommand("select-k", "fit rbmmsbm over a k range, pick the ELBO argmax");
    std::string sel_range;
    add_common_fit_flags(sel, o);
        sel->add_option("--k-range", sel_range, "lo:hi inclusive")->required();

    auto* ev = app.add_subcommand("eval", "NMI between label files / JS between membership matrices");
    std::string ev_a, ev_b, ev_est, ev_truth, ev_out;
    ev->add_option("--labels-a", ev_a, "label file");
    ev->add_option("--labels-b", ev_b, "label file");
    ev->add_option("--mm-est", ev_est, "membership CSV");
    ev->add_option("--mm-truth", ev_truth, "membership CSV");
    ev->add_option("--out", ev_out, "optional output directory");

    auto* laz = app.add_subcommand("encode-lazega", "one-hot encode the lawyer-firm attribute table");
    std::string laz_attr, laz_edges, laz_out = "rbnet_out";
    laz->add_option("--attributes", laz_attr, "attribute CSV")->required();
    laz->add_option("--edges", laz_edges, "friendship edge list TSV")->required();
    laz->add_option("--out", laz_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return cmd_generate(gen_n, gen_kind, gen_m, gen_k, gen_seed, gen_out, gen_threads);
        if (fit_cmd->parsed()) { apply_config(fit_cmd, o); return cmd_fit(o); }
        if (pred->parsed()) { apply_config(pred, o); return cmd_predict_links(o); }
        if (expl->parsed()) return cmd_explain(expl_fit_dir, expl_top_n, expl_out, expl_threads);
        if (sel->parsed()) { apply_config(sel, o); return cmd_select_k(o, sel_range); }
        if (ev->parsed()) return cmd_eval(ev_a, ev_b, ev_est, ev_truth, ev_out);
        if (laz->parsed()) {
            auto net = encode_lazega(laz_attr, laz_edges);
            io::ensure_dir(laz_out);
            save_network(net, laz_out + "/edges.tsv", laz_out + "/covariates.csv");
            std::printf("encoded: n=%d |E|=%d m=%d\n", net.n, net.num_edges(), net.m);
            return 0;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
