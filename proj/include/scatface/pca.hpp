#pragma once

#include <filesystem>
#include <vector>

#include "scatface/linalg.hpp"

namespace scatface {

struct PcaModel {
    int d = 0;                        // input dimension
    int m = 0;                        // retained components (≤ requested)
    std::vector<double> mean;         // d
    Matrix basis;                     // d×m, orthonormal columns
    std::vector<double> eigenvalues;  // m, non-increasing
};

/// Top-m eigenvectors of the (unnormalized) covariance Σ(x−μ)(x−μ)ᵀ of the
/// rows of X.  Uses the n×n Gram matrix when n−1 < d.  m is clamped to the
/// numerical rank (with a note on stderr); all-identical rows are an error.
/// Columns are sign-canonicalized: largest-magnitude entry positive.
PcaModel fit_pca(const Matrix& X, int m);

/// (X − μ)·W.  Test data is centered with the training mean.
Matrix project(const PcaModel& model, const Matrix& X);

void save_pca_json(const PcaModel& model, const std::filesystem::path& out);
PcaModel load_pca_json(const std::filesystem::path& in);

}  // namespace scatface
