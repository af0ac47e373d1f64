#include "rbnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "rbnet/io.hpp"
#include "rbnet/rng.hpp"

namespace rbnet {

bool AttributedNetwork::has_edge(int i, int j) const {
    const auto& nb = out_nbrs[i];
    return std::binary_search(nb.begin(), nb.end(), j);
}

double AttributedNetwork::covariate(int i, int j) const {
    for (auto& [c, v] : y_rows[i])
        if (c == j) return v;
    return 0.0;
}

void AttributedNetwork::rebuild_adjacency() {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    out_nbrs.assign(n, {});
    in_nbrs.assign(n, {});
    for (auto& [s, t] : edges) {
        out_nbrs[s].push_back(t);
        in_nbrs[t].push_back(s);
    }
    for (auto& v : in_nbrs) std::sort(v.begin(), v.end());
}

void AttributedNetwork::build_column_index() {
    y_cols.assign(m, {});
    for (int i = 0; i < n; ++i)
        for (auto& [j, v] : y_rows[i]) y_cols[j].emplace_back(i, v);
}

void AttributedNetwork::validate() const {
    for (auto& [s, t] : edges) {
        if (s == t) throw std::runtime_error("self-loop in edge set");
        if (s < 0 || s >= n || t < 0 || t >= n) throw std::runtime_error("edge endpoint out of range");
    }
    for (int i = 0; i < n; ++i)
        for (auto& [j, v] : y_rows[i]) {
            if (j < 0 || j >= m) throw std::runtime_error("covariate index out of range");
            if (mode == CovariateMode::binary) {
                if (v != 0.0 && v != 1.0) throw std::runtime_error("binary covariate outside {0,1}");
            } else if (v < 0.0 || v > 1.0) {
                throw std::runtime_error("continuous covariate outside [0,1]");
            }
        }
    if (!labels.empty() && static_cast<int>(labels.size()) != n)
        throw std::runtime_error("label count != node count");
    if (mm_labels.rows > 0) {
        if (mm_labels.rows != n) throw std::runtime_error("mm_labels row count != node count");
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int l = 0; l < mm_labels.cols; ++l) {
                if (mm_labels(i, l) < 0.0) throw std::runtime_error("mm_labels entry negative");
                s += mm_labels(i, l);
            }
            if (std::abs(s - 1.0) > 1e-9) throw std::runtime_error("mm_labels row does not sum to 1");
        }
    }
}

static std::vector<Edge> parse_edge_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open edge file: " + path);
    std::vector<Edge> out;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        long s, t;
        if (!(ss >> s >> t))
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 'src\\tdst'");
        if (s < 0 || t < 0)
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": node ids must be 0-based integers");
        out.emplace_back(static_cast<int>(s), static_cast<int>(t));
    }
    return out;
}

AttributedNetwork load_network(const std::string& edge_file, const std::string& covariate_file,
                               CovariateMode mode, Directedness directedness) {
    AttributedNetwork net;
    net.mode = mode;

    Mat Y = io::read_matrix_csv(covariate_file, /*expect_header=*/true);
    net.n = Y.rows;
    net.m = Y.cols;

    auto raw = parse_edge_file(edge_file);
    std::vector<Edge> kept;
    kept.reserve(raw.size() * (directedness == Directedness::undirected ? 2 : 1));
    int self_loops = 0;
    for (auto& [s, t] : raw) {
        if (s >= net.n || t >= net.n)
            throw std::runtime_error("edge references node " + std::to_string(std::max(s, t)) +
                                     " but covariate file has only " + std::to_string(net.n) + " rows");
        if (s == t) {
            ++self_loops;
            continue;
        }
        kept.emplace_back(s, t);
        if (directedness == Directedness::undirected) kept.emplace_back(t, s);
    }
    if (self_loops > 0) std::fprintf(stderr, "warning: dropped %d self-loop(s) from %s\n", self_loops, edge_file.c_str());
    size_t before = kept.size();
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    if (kept.size() != before && directedness == Directedness::directed)
        std::fprintf(stderr, "warning: removed %zu duplicate edge(s) from %s\n", before - kept.size(),
                     edge_file.c_str());
    net.edges = std::move(kept);
    net.rebuild_adjacency();

    // Continuous columns outside [0,1] get min-max rescaled per column.
    if (mode == CovariateMode::continuous) {
        for (int j = 0; j < net.m; ++j) {
            double lo = 1e300, hi = -1e300;
            for (int i = 0; i < net.n; ++i) {
                lo = std::min(lo, Y(i, j));
                hi = std::max(hi, Y(i, j));
            }
            if (lo < 0.0 || hi > 1.0) {
                double span = hi - lo;
                for (int i = 0; i < net.n; ++i) Y(i, j) = span > 0.0 ? (Y(i, j) - lo) / span : 0.0;
            }
        }
    }
    net.y_rows.assign(net.n, {});
    for (int i = 0; i < net.n; ++i)
        for (int j = 0; j < net.m; ++j) {
            double v = Y(i, j);
            if (mode == CovariateMode::binary && v != 0.0 && v != 1.0)
                throw std::runtime_error("binary covariate file has entry " + io::fmt_double(v));
            if (v != 0.0) net.y_rows[i].emplace_back(j, v);
        }
    net.validate();
    return net;
}

void save_network(const AttributedNetwork& net, const std::string& edge_file, const std::string& covariate_file,
                  const std::string& label_file, const std::string& mm_label_file) {
    {
        std::ofstream f(edge_file);
        if (!f) throw std::runtime_error("cannot write " + edge_file);
        for (auto& [s, t] : net.edges) f << s << "\t" << t << "\n";
    }
    Mat Y(net.n, net.m);
    for (int i = 0; i < net.n; ++i)
        for (auto& [j, v] : net.y_rows[i]) Y(i, j) = v;
    std::vector<std::string> header(net.m);
    for (int j = 0; j < net.m; ++j) header[j] = "c" + std::to_string(j);
    io::write_matrix_csv(covariate_file, Y, header);
    if (!label_file.empty() && !net.labels.empty()) save_labels(label_file, net.labels);
    if (!mm_label_file.empty() && net.mm_labels.rows > 0) io::write_matrix_csv(mm_label_file, net.mm_labels);
}

std::vector<int> load_labels(const std::string& path) {
    std::vector<int> out;
    for (auto& l : io::read_lines(path)) {
        if (l.empty() || l[0] == '#') continue;
        out.push_back(std::stoi(l));
    }
    return out;
}

void save_labels(const std::string& path, const std::vector<int>& labels) {
    std::vector<std::string> lines;
    lines.reserve(labels.size());
    for (int v : labels) lines.push_back(std::to_string(v));
    io::write_lines(path, lines);
}

LinkSplit make_link_split(const AttributedNetwork& net, double fraction, std::uint64_t seed) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw std::runtime_error("split fraction must lie in (0,1)");
    const long long target = static_cast<long long>(std::ceil(fraction * net.num_edges()));
    if (target == 0) throw std::runtime_error("split selects zero edges");

    // Availability of negatives is checked over unordered pairs.
    std::set<std::pair<int, int>> adj_unordered;
    for (auto& [s, t] : net.edges) adj_unordered.insert({std::min(s, t), std::max(s, t)});
    const long long total_unordered = static_cast<long long>(net.n) * (net.n - 1) / 2;
    const long long available = total_unordered - static_cast<long long>(adj_unordered.size());
    if (available < target)
        throw std::runtime_error("network too dense: only " + std::to_string(available) +
                                 " non-adjacent pairs for " + std::to_string(target) + " negatives");

    Rng rng = Rng::stream(seed, "split");

    // Positives: partial Fisher-Yates over the edge list.
    std::vector<int> idx(net.edges.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    for (long long i = 0; i < target; ++i) {
        int j = static_cast<int>(i) + rng.uniform_int(static_cast<int>(idx.size() - i));
        std::swap(idx[i], idx[j]);
    }
    std::vector<Edge> pos;
    pos.reserve(target);
    for (long long i = 0; i < target; ++i) pos.push_back(net.edges[idx[i]]);

    // Negatives without replacement; enumerate when the graph is nearly full.
    std::vector<Edge> neg;
    neg.reserve(target);
    std::set<std::pair<int, int>> taken;
    if (available < 2 * target) {
        std::vector<Edge> pool;
        for (int i = 0; i < net.n; ++i)
            for (int j = i + 1; j < net.n; ++j)
                if (!adj_unordered.count({i, j})) pool.emplace_back(i, j);
        for (long long i = 0; i < target; ++i) {
            int j = static_cast<int>(i) + rng.uniform_int(static_cast<int>(pool.size() - i));
            std::swap(pool[i], pool[j]);
            auto [a, b] = pool[i];
            neg.push_back(rng.bernoulli(0.5) ? Edge{b, a} : Edge{a, b});
        }
    } else {
        while (static_cast<long long>(neg.size()) < target) {
            int a = rng.uniform_int(net.n);
            int b = rng.uniform_int(net.n);
            if (a == b) continue;
            std::pair<int, int> u{std::min(a, b), std::max(a, b)};
            if (adj_unordered.count(u) || taken.count(u)) continue;
            taken.insert(u);
            neg.emplace_back(a, b);
        }
    }

    LinkSplit split;
    split.fraction = fraction;
    split.seed = seed;
    split.heldout_pos = pos;
    split.heldout_neg = neg;
    split.mask = pos;
    split.mask.insert(split.mask.end(), neg.begin(), neg.end());
    std::sort(split.mask.begin(), split.mask.end());

    split.observed = net;
    std::set<Edge> removed(pos.begin(), pos.end());
    std::vector<Edge> kept;
    kept.reserve(net.edges.size() - pos.size());
    for (auto& e : net.edges)
        if (!removed.count(e)) kept.push_back(e);
    split.observed.edges = std::move(kept);
    split.observed.rebuild_adjacency();
    return split;
}

void save_split(const std::string& path, const LinkSplit& split) {
    io::KvList kv;
    kv.emplace_back("format", "rbnet-split-v1");
    kv.emplace_back("fraction", io::fmt_double(split.fraction));
    kv.emplace_back("seed", std::to_string(split.seed));
    for (auto& [s, t] : split.heldout_pos) kv.emplace_back("pos", std::to_string(s) + "," + std::to_string(t));
    for (auto& [s, t] : split.heldout_neg) kv.emplace_back("neg", std::to_string(s) + "," + std::to_string(t));
    io::write_kv(path, kv);
}

LinkSplit load_split(const std::string& path, const AttributedNetwork& full_net) {
    LinkSplit split;
    auto parse_pair = [](const std::string& v) {
        auto comma = v.find(',');
        if (comma == std::string::npos) throw std::runtime_error("malformed pair in split file: " + v);
        return Edge{std::stoi(v.substr(0, comma)), std::stoi(v.substr(comma + 1))};
    };
    bool saw_format = false;
    for (auto& [k, v] : io::read_kv(path)) {
        if (k == "format") {
            if (v != "rbnet-split-v1") throw std::runtime_error("unknown split format: " + v);
            saw_format = true;
        } else if (k == "fraction") {
            split.fraction = std::stod(v);
        } else if (k == "seed") {
            split.seed = std::stoull(v);
        } else if (k == "pos") {
            split.heldout_pos.push_back(parse_pair(v));
        } else if (k == "neg") {
            split.heldout_neg.push_back(parse_pair(v));
        }
    }
    if (!saw_format) throw std::runtime_error(path + ": missing format key");
    split.mask = split.heldout_pos;
    split.mask.insert(split.mask.end(), split.heldout_neg.begin(), split.heldout_neg.end());
    std::sort(split.mask.begin(), split.mask.end());
    split.observed = full_net;
    std::set<Edge> removed(split.heldout_pos.begin(), split.heldout_pos.end());
    std::vector<Edge> kept;
    for (auto& e : full_net.edges)
        if (!removed.count(e)) kept.push_back(e);
    split.observed.edges = std::move(kept);
    split.observed.rebuild_adjacency();
    return split;
}

AttributedNetwork binarize_covariates(const AttributedNetwork& net, int bins) {
    if (net.mode != CovariateMode::continuous) throw std::runtime_error("binarize_covariates needs continuous mode");
    if (bins < 2) throw std::runtime_error("binarize_covariates needs bins >= 2");
    AttributedNetwork out = net;
    out.mode = CovariateMode::binary;
    out.m = net.m * bins;
    out.y_rows.assign(net.n, {});
    out.y_cols.clear();
    for (int i = 0; i < net.n; ++i) {
        // Dense pass over original columns: zero is a value too and lands in bin 0.
        std::vector<double> row(net.m, 0.0);
        for (auto& [j, v] : net.y_rows[i]) row[j] = v;
        out.y_rows[i].reserve(net.m);
        for (int j = 0; j < net.m; ++j) {
            int b = std::min(static_cast<int>(row[j] * bins), bins - 1);
            out.y_rows[i].emplace_back(j * bins + b, 1.0);
        }
    }
    return out;
}

namespace {

int lazega_onehot(const std::string& what, int code, int count) {
    if (code < 1 || code > count)
        throw std::runtime_error("lazega: unknown " + what + " code " + std::to_string(code));
    return code - 1;
}

int lazega_age_bin(int age) {
    if (age >= 20 && age <= 30) return 0;
    if (age <= 40) return 1;
    if (age <= 50) return 2;
    if (age <= 60) return 3;
    if (age <= 70) return 4;
    throw std::runtime_error("lazega: age " + std::to_string(age) + " outside [20,70]");
}

int lazega_tenure_bin(int years) {
    if (years < 0 || years > 35) throw std::runtime_error("lazega: tenure outside [0,35]");
    return std::min(years / 5, 6);
}

}  // namespace

AttributedNetwork encode_lazega(const std::string& attr_table, const std::string& edge_file) {
    std::vector<std::string> header;
    Mat table = io::read_matrix_csv(attr_table, /*expect_header=*/true, &header);
    std::map<std::string, int> col;
    for (size_t j = 0; j < header.size(); ++j) col[header[j]] = static_cast<int>(j);
    for (const char* need : {"status", "gender", "office", "years", "age", "practice", "school"})
        if (!col.count(need)) throw std::runtime_error("lazega attribute table missing column: " + std::string(need));

    const int n = table.rows;
    // Layout: status(2) gender(2) office(3) years(7) age(5) practice(2) school(3) = 24.
    const int off_status = 0, off_gender = 2, off_office = 4, off_years = 7, off_age = 14, off_practice = 19,
              off_school = 21, width = 24;

    AttributedNetwork net;
    net.mode = CovariateMode::binary;
    net.n = n;
    net.m = width;
    net.y_rows.assign(n, {});
    for (int i = 0; i < n; ++i) {
        auto code = [&](const char* c) { return static_cast<int>(std::lround(table(i, col[c]))); };
        std::vector<int> on = {
            off_status + lazega_onehot("status", code("status"), 2),
            off_gender + lazega_onehot("gender", code("gender"), 2),
            off_office + lazega_onehot("office", code("office"), 3),
            off_years + lazega_tenure_bin(code("years")),
            off_age + lazega_age_bin(code("age")),
            off_practice + lazega_onehot("practice", code("practice"), 2),
            off_school + lazega_onehot("school", code("school"), 3),
        };
        std::sort(on.begin(), on.end());
        for (int j : on) net.y_rows[i].emplace_back(j, 1.0);
    }

    auto raw = parse_edge_file(edge_file);
    for (auto& [s, t] : raw) {
        if (s >= n || t >= n) throw std::runtime_error("lazega edge endpoint out of range");
        if (s == t) continue;
        net.edges.emplace_back(s, t);
        net.edges.emplace_back(t, s);
    }
    net.rebuild_adjacency();
    net.validate();
    return net;
}

}  // namespace rbnet
