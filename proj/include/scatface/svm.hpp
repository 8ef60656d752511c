#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "scatface/linalg.hpp"

namespace scatface {

struct Kernel {
    enum class Kind { linear, rbf, polynomial };
    Kind kind = Kind::linear;
    double gamma = 1.0;  // rbf
    int degree = 2;      // polynomial
    double coef = 0.0;   // polynomial

    double operator()(std::span<const double> x, std::span<const double> y) const;

    static Kernel linear() { return {}; }
    static Kernel rbf(double gamma);
    static Kernel polynomial(int degree, double coef = 0.0);
};

struct BinarySvm {
    Matrix support_vectors;           // s×d
    std::vector<double> dual_coeffs;  // α_i·y_i per support vector
    double bias = 0.0;
    Kernel kernel;
    double C = 1.0;
};

struct SmoOptions {
    double tol = 1e-3;                      // stop when max KKT violation < tol
    long long max_updates = 10'000'000;     // pair-update budget
};

/// Soft-margin dual via sequential minimal optimization with
/// maximal-violating-pair selection.  y entries must be ±1, both present.
BinarySvm train_binary(const Matrix& X, const std::vector<int>& y, const Kernel& kernel,
                       double C, const SmoOptions& opts = {});

/// Σ αᵢyᵢ K(x, xᵢ) + b — the pre-sign decision value.
double decision(const BinarySvm& svm, std::span<const double> x);

enum class MulticlassScheme { one_vs_one, one_vs_rest };

MulticlassScheme scheme_from_string(const std::string& s);
const char* to_string(MulticlassScheme s);

struct SvmModel {
    struct Binary {
        int positive = 0;   // class label this binary votes for with +1
        int negative = -1;  // opposing class label; -1 means "rest"
        BinarySvm svm;
    };
    MulticlassScheme scheme = MulticlassScheme::one_vs_one;
    std::vector<int> classes;  // sorted
    std::vector<Binary> binaries;
};

SvmModel train_multiclass(const Matrix& X, const std::vector<int>& labels,
                          const Kernel& kernel, double C,
                          MulticlassScheme scheme = MulticlassScheme::one_vs_one,
                          const SmoOptions& opts = {}, int jobs = 1);

int predict(const SvmModel& model, std::span<const double> x);

void save_svm_json(const SvmModel& model, const std::filesystem::path& out);
SvmModel load_svm_json(const std::filesystem::path& in);

}  // namespace scatface
