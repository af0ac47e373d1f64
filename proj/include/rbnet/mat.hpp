#pragma once

#include <cassert>
#include <cstddef>
#include <vector>

namespace rbnet {

// Dense row-major matrix of doubles. Deliberately minimal: the hot loops in
// this project index raw rows, so no expression templates or views.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(int r, int c, double fill = 0.0) : rows(r), cols(c), data(static_cast<size_t>(r) * c, fill) {}

    double& operator()(int i, int j) {
        assert(i >= 0 && i < rows && j >= 0 && j < cols);
        return data[static_cast<size_t>(i) * cols + j];
    }
    double operator()(int i, int j) const {
        assert(i >= 0 && i < rows && j >= 0 && j < cols);
        return data[static_cast<size_t>(i) * cols + j];
    }
    double* row(int i) { return data.data() + static_cast<size_t>(i) * cols; }
    const double* row(int i) const { return data.data() + static_cast<size_t>(i) * cols; }

    void fill(double v) { std::fill(data.begin(), data.end(), v); }
    bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
};

inline double max_abs_diff(const Mat& a, const Mat& b) {
    assert(a.same_shape(b));
    double d = 0.0;
    for (size_t i = 0; i < a.data.size(); ++i) {
        double x = a.data[i] - b.data[i];
        if (x < 0) x = -x;
        if (x > d) d = x;
    }
    return d;
}

}  // namespace rbnet
