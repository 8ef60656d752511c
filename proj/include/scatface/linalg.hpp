#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace scatface {

/// Dense row-major matrix of doubles.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    std::span<double> row(int i) { return {a.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)}; }
    std::span<const double> row(int i) const {
        return {a.data() + static_cast<std::size_t>(i) * cols, static_cast<std::size_t>(cols)};
    }
};

inline double dot(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

}  // namespace scatface
