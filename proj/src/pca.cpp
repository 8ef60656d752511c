#include "scatface/pca.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "scatface/jacobi.hpp"

namespace scatface {

namespace {

void canonicalize_sign(Matrix& W) {
    for (int k = 0; k < W.cols; ++k) {
        int best = 0;
        for (int i = 1; i < W.rows; ++i)
            if (std::abs(W(i, k)) > std::abs(W(best, k))) best = i;
        if (W(best, k) < 0)
            for (int i = 0; i < W.rows; ++i) W(i, k) = -W(i, k);
    }
}

}  // namespace

PcaModel fit_pca(const Matrix& X, int m) {
    const int n = X.rows, d = X.cols;
    if (n < 2) throw std::invalid_argument("fit_pca: need at least 2 samples");
    if (m < 1) throw std::invalid_argument("fit_pca: need m >= 1");

    PcaModel model;
    model.d = d;
    model.mean.assign(d, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) model.mean[j] += X(i, j);
    for (double& v : model.mean) v /= n;

    Matrix Xc(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) Xc(i, j) = X(i, j) - model.mean[j];

    std::vector<double> evals;
    Matrix W;  // d × (candidate count), unit columns
    if (n - 1 < d) {
        // Gram ("snapshot") route: eigenvectors of Xc·Xcᵀ map back through Xcᵀ.
        Matrix G(n, n);
        for (int i = 0; i < n; ++i)
            for (int k = i; k < n; ++k) G(i, k) = G(k, i) = dot(Xc.row(i), Xc.row(k));
        auto eig = jacobi_eigen(G);
        evals = eig.values;
        W = Matrix(d, n);
        for (int k = 0; k < n; ++k) {
            if (eig.values[k] <= 0) continue;
            const double inv = 1 / std::sqrt(eig.values[k]);
            for (int i = 0; i < n; ++i) {
                const double c = eig.vectors(i, k) * inv;
                if (c == 0.0) continue;
                auto xi = Xc.row(i);
                for (int j = 0; j < d; ++j) W(j, k) += c * xi[j];
            }
        }
    } else {
        Matrix S(d, d);
        for (int i = 0; i < n; ++i) {
            auto xi = Xc.row(i);
            for (int a = 0; a < d; ++a)
                for (int b = a; b < d; ++b) S(a, b) += xi[a] * xi[b];
        }
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < a; ++b) S(a, b) = S(b, a);
        auto eig = jacobi_eigen(S);
        evals = eig.values;
        W = std::move(eig.vectors);
    }

    const double lambda_max = evals.empty() ? 0.0 : evals[0];
    if (lambda_max <= 0) throw std::invalid_argument("fit_pca: zero-rank data");
    int rank = 0;
    while (rank < static_cast<int>(evals.size()) && evals[rank] > 1e-10 * lambda_max) ++rank;

    const int keep = std::min(m, rank);
    if (keep < m)
        std::fprintf(stderr, "fit_pca: requested %d components, keeping %d (rank limit)\n",
                     m, keep);

    model.m = keep;
    model.eigenvalues.assign(evals.begin(), evals.begin() + keep);
    model.basis = Matrix(d, keep);
    for (int k = 0; k < keep; ++k)
        for (int j = 0; j < d; ++j) model.basis(j, k) = W(j, k);
    canonicalize_sign(model.basis);
    return model;
}

Matrix project(const PcaModel& model, const Matrix& X) {
    if (X.cols != model.d) throw std::invalid_argument("project: dimension mismatch");
    Matrix Y(X.rows, model.m);
    std::vector<double> xc(model.d);
    for (int i = 0; i < X.rows; ++i) {
        auto xi = X.row(i);
        for (int j = 0; j < model.d; ++j) xc[j] = xi[j] - model.mean[j];
        for (int k = 0; k < model.m; ++k) {
            double s = 0;
            for (int j = 0; j < model.d; ++j) s += xc[j] * model.basis(j, k);
            Y(i, k) = s;
        }
    }
    return Y;
}

void save_pca_json(const PcaModel& model, const std::filesystem::path& out) {
    nlohmann::json j{{"format", "pca"},
                     {"version", 1},
                     {"covariance", "unnormalized"},
                     {"d", model.d},
                     {"m", model.m},
                     {"mean", model.mean},
                     {"eigenvalues", model.eigenvalues},
                     {"basis", model.basis.a}};
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out.string());
    f << j.dump(2) << '\n';
    if (!f.flush()) throw std::runtime_error("write failed: " + out.string());
}

PcaModel load_pca_json(const std::filesystem::path& in) {
    std::ifstream f(in);
    if (!f) throw std::runtime_error("cannot open " + in.string());
    nlohmann::json j = nlohmann::json::parse(f);
    if (j.at("format") != "pca" || j.at("version") != 1)
        throw std::runtime_error("unsupported pca model file: " + in.string());
    PcaModel model;
    model.d = j.at("d").get<int>();
    model.m = j.at("m").get<int>();
    model.mean = j.at("mean").get<std::vector<double>>();
    model.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    model.basis = Matrix(model.d, model.m);
    model.basis.a = j.at("basis").get<std::vector<double>>();
    if (model.basis.a.size() != std::size_t(model.d) * model.m)
        throw std::runtime_error("corrupt pca model file: " + in.string());
    return model;
}

}  // namespace scatface
