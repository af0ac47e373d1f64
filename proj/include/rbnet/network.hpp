#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rbnet/mat.hpp"

namespace rbnet {

enum class CovariateMode { binary, continuous };
enum class Directedness { directed, undirected };

using Edge = std::pair<int, int>;

// A directed simple graph over n nodes with an n x m covariate matrix.
// Undirected inputs are symmetrized at load time; every consumer works with
// ordered pairs i != j. Immutable after construction, safe to share read-only.
struct AttributedNetwork {
    int n = 0;
    int m = 0;
    CovariateMode mode = CovariateMode::binary;

    std::vector<Edge> edges;                  // sorted, unique, no self-loops
    std::vector<std::vector<int>> out_nbrs;   // sorted
    std::vector<std::vector<int>> in_nbrs;    // sorted

    // Covariates stored sparse by row; a column index is built on demand for
    // the M-step statistics.
    std::vector<std::vector<std::pair<int, double>>> y_rows;
    std::vector<std::vector<std::pair<int, double>>> y_cols;

    std::vector<int> labels;  // empty when absent
    Mat mm_labels;            // rows 0 when absent

    int num_edges() const { return static_cast<int>(edges.size()); }
    bool has_edge(int i, int j) const;
    double covariate(int i, int j) const;  // dense read of Y(i,j)
    void rebuild_adjacency();              // from `edges`
    void build_column_index();
    void validate() const;  // throws on invariant violation
};

struct LinkSplit {
    AttributedNetwork observed;   // held-out edges removed
    std::vector<Edge> heldout_pos;
    std::vector<Edge> heldout_neg;
    std::vector<Edge> mask;       // pos + neg, sorted
    double fraction = 0.0;
    std::uint64_t seed = 0;
};

AttributedNetwork load_network(const std::string& edge_file, const std::string& covariate_file,
                               CovariateMode mode, Directedness directedness);
void save_network(const AttributedNetwork& net, const std::string& edge_file, const std::string& covariate_file,
                  const std::string& label_file = "", const std::string& mm_label_file = "");

std::vector<int> load_labels(const std::string& path);
void save_labels(const std::string& path, const std::vector<int>& labels);

// Uniformly masks ceil(fraction * |edges|) edges plus the same number of
// distinct non-edges (ordered pairs whose unordered pair carries no edge).
LinkSplit make_link_split(const AttributedNetwork& net, double fraction, std::uint64_t seed);

void save_split(const std::string& path, const LinkSplit& split);
// Reattaches a persisted split to the full network it was made from.
LinkSplit load_split(const std::string& path, const AttributedNetwork& full_net);

// One-hot bins per continuous column; output has m*bins binary covariates and
// every row sums to the original m.
AttributedNetwork binarize_covariates(const AttributedNetwork& net, int bins);

// Lawyer-firm friendship data: categorical attributes one-hot encoded, age in
// decade bins [20,30],[31,40],...,[61,70], tenure 0-35 in bins of size 5;
// 24 binary covariates total. Attribute CSV needs a header with columns
// status,gender,office,years,age,practice,school (numeric codes).
AttributedNetwork encode_lazega(const std::string& attr_table, const std::string& edge_file);

}  // namespace rbnet
