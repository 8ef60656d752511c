#include "scatface/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace scatface {

namespace {

double offdiag_norm(const Matrix& A) {
    double s = 0;
    for (int p = 0; p < A.rows; ++p)
        for (int q = p + 1; q < A.cols; ++q) s += A(p, q) * A(p, q);
    return std::sqrt(2 * s);
}

}  // namespace

EigenDecomposition jacobi_eigen(const Matrix& A0) {
    const int n = A0.rows;
    if (n != A0.cols) throw std::invalid_argument("jacobi_eigen: matrix not square");
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q)
            if (std::abs(A0(p, q) - A0(q, p)) > 1e-9 * (1 + std::abs(A0(p, q))))
                throw std::invalid_argument("jacobi_eigen: matrix not symmetric");

    Matrix A = A0;
    Matrix V(n, n);
    for (int i = 0; i < n; ++i) V(i, i) = 1.0;

    double frob = 0;
    for (double v : A.a) frob += v * v;
    frob = std::sqrt(frob);
    const double stop = 1e-12 * frob;

    for (int sweep = 0; sweep < 100 && offdiag_norm(A) > stop; ++sweep) {
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = A(p, q);
                if (apq == 0.0) continue;
                const double tau = (A(q, q) - A(p, p)) / (2 * apq);
                const double t = (tau >= 0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1 + tau * tau));
                const double c = 1 / std::sqrt(1 + t * t);
                const double s = t * c;

                const double app = A(p, p), aqq = A(q, q);
                A(p, p) = app - t * apq;
                A(q, q) = aqq + t * apq;
                A(p, q) = A(q, p) = 0.0;
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = A(i, p), aiq = A(i, q);
                    A(i, p) = A(p, i) = c * aip - s * aiq;
                    A(i, q) = A(q, i) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double vip = V(i, p), viq = V(i, q);
                    V(i, p) = c * vip - s * viq;
                    V(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return A(a, a) > A(b, b); });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (int k = 0; k < n; ++k) {
        out.values[k] = A(idx[k], idx[k]);
        for (int i = 0; i < n; ++i) out.vectors(i, k) = V(i, idx[k]);
    }
    return out;
}

}  // namespace scatface
