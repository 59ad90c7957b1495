#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "lamc/errors.hpp"

namespace lamc {

// Dense row-major matrix of doubles. Deliberately minimal: the kernels in
// kernels.cpp own all the hot loops, this type only owns the storage.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0)
        : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    std::span<double> row(std::size_t r) { return {data.data() + r * cols, cols}; }
    std::span<const double> row(std::size_t r) const {
        return {data.data() + r * cols, cols};
    }

    bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

    void fill(double v) { data.assign(data.size(), v); }
};

// Summation with a fixed, thread-count-independent association order.
// Used wherever per-instance values produced in parallel are reduced to a mean.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

inline double mean_of(std::span<const double> v) {
    if (v.empty()) throw ShapeError("mean_of: empty input");
    return pairwise_sum(v) / static_cast<double>(v.size());
}

// Sample standard deviation (n-1 denominator); 0 for a single value.
inline double stddev_of(std::span<const double> v) {
    if (v.empty()) throw ShapeError("stddev_of: empty input");
    if (v.size() == 1) return 0.0;
    const double m = mean_of(v);
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - m) * (v[i] - m);
    return std::sqrt(pairwise_sum(sq) / static_cast<double>(v.size() - 1));
}

} // namespace lamc
