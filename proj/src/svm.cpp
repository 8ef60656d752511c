#include "scatface/svm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "scatface/parallel.hpp"

namespace scatface {

double Kernel::operator()(std::span<const double> x, std::span<const double> y) const {
    switch (kind) {
        case Kind::linear:
            return dot(x, y);
        case Kind::rbf: {
            double s = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double d = x[i] - y[i];
                s += d * d;
            }
            return std::exp(-gamma * s);
        }
        default:
            return std::pow(dot(x, y) + coef, degree);
    }
}

Kernel Kernel::rbf(double gamma) {
    if (gamma <= 0) throw std::invalid_argument("rbf kernel needs gamma > 0");
    Kernel k;
    k.kind = Kind::rbf;
    k.gamma = gamma;
    return k;
}

Kernel Kernel::polynomial(int degree, double coef) {
    if (degree < 1) throw std::invalid_argument("polynomial kernel needs degree >= 1");
    Kernel k;
    k.kind = Kind::polynomial;
    k.degree = degree;
    k.coef = coef;
    return k;
}

BinarySvm train_binary(const Matrix& X, const std::vector<int>& y, const Kernel& kernel,
                       double C, const SmoOptions& opts) {
    const int n = X.rows;
    if (n < 2 || static_cast<int>(y.size()) != n)
        throw std::invalid_argument("train_binary: need >= 2 labelled samples");
    if (C <= 0) throw std::invalid_argument("train_binary: C must be positive");
    bool pos = false, neg = false;
    for (int v : y) {
        if (v == 1) pos = true;
        else if (v == -1) neg = true;
        else throw std::invalid_argument("train_binary: labels must be +1/-1");
    }
    if (!pos || !neg) throw std::invalid_argument("train_binary: both classes required");
    for (double v : X.a)
        if (!std::isfinite(v)) throw std::invalid_argument("train_binary: non-finite feature");

    // Full kernel matrix; binary problems in this codebase stay small.
    Matrix K(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) K(i, j) = K(j, i) = kernel(X.row(i), X.row(j));

    std::vector<double> alpha(n, 0.0);
    std::vector<double> grad(n, -1.0);  // ∇ of ½αᵀQα − eᵀα at α = 0

    const double inf = std::numeric_limits<double>::infinity();
    long long updates = 0;
    for (; updates < opts.max_updates; ++updates) {
        // Maximal violating pair over I_up / I_low.
        int i = -1, j = -1;
        double m = -inf, M = inf;
        for (int t = 0; t < n; ++t) {
            const double yg = -y[t] * grad[t];
            const bool up = y[t] > 0 ? alpha[t] < C : alpha[t] > 0;
            const bool low = y[t] > 0 ? alpha[t] > 0 : alpha[t] < C;
            if (up && yg > m) { m = yg; i = t; }
            if (low && yg < M) { M = yg; j = t; }
        }
        if (i < 0 || j < 0 || m - M < opts.tol) break;

        double eta = K(i, i) + K(j, j) - 2 * K(i, j);
        if (eta <= 0) eta = 1e-12;

        // Newton step clipped to the feasible segment. Variables land exactly
        // on a bound when it binds, so saturated points drop out of I_up/I_low
        // instead of lingering one ulp inside the box.
        double ai = alpha[i], aj = alpha[j];
        if (y[i] != y[j]) {
            const double delta = -(grad[i] + grad[j]) / eta;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0) {
                if (aj < 0) { aj = 0; ai = diff; }
                if (ai > C) { ai = C; aj = C - diff; }
            } else {
                if (ai < 0) { ai = 0; aj = -diff; }
                if (aj > C) { aj = C; ai = C + diff; }
            }
        } else {
            const double delta = (grad[i] - grad[j]) / eta;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > C) {
                if (ai > C) { ai = C; aj = sum - C; }
                if (aj > C) { aj = C; ai = sum - C; }
            } else {
                if (aj < 0) { aj = 0; ai = sum; }
                if (ai < 0) { ai = 0; aj = sum; }
            }
        }
        const double di = ai - alpha[i], dj = aj - alpha[j];
        if (di == 0.0 && dj == 0.0) break;  // fp stall; the same pair would repeat forever
        alpha[i] = ai;
        alpha[j] = aj;

        for (int t = 0; t < n; ++t)
            grad[t] += y[t] * (y[i] * K(t, i) * di + y[j] * K(t, j) * dj);
    }

    // b from interior points (y·f = 1 there), else the violation midpoint.
    double b;
    {
        double sum = 0;
        int free_count = 0;
        double m = -inf, M = inf;
        for (int t = 0; t < n; ++t) {
            const double yg = -y[t] * grad[t];
            if (alpha[t] > 0 && alpha[t] < C) {
                sum += yg;
                ++free_count;
            }
            const bool up = y[t] > 0 ? alpha[t] < C : alpha[t] > 0;
            const bool low = y[t] > 0 ? alpha[t] > 0 : alpha[t] < C;
            if (up) m = std::max(m, yg);
            if (low) M = std::min(M, yg);
        }
        b = free_count ? sum / free_count : (m + M) / 2;
    }

    BinarySvm svm;
    svm.kernel = kernel;
    svm.C = C;
    svm.bias = b;
    int count = 0;
    for (int t = 0; t < n; ++t)
        if (alpha[t] > 0) ++count;
    svm.support_vectors = Matrix(count, X.cols);
    svm.dual_coeffs.reserve(count);
    int s = 0;
    for (int t = 0; t < n; ++t) {
        if (alpha[t] <= 0) continue;
        std::copy(X.row(t).begin(), X.row(t).end(), svm.support_vectors.row(s).begin());
        svm.dual_coeffs.push_back(alpha[t] * y[t]);
        ++s;
    }
    return svm;
}

double decision(const BinarySvm& svm, std::span<const double> x) {
    if (static_cast<int>(x.size()) != svm.support_vectors.cols)
        throw std::invalid_argument("decision: dimension mismatch");
    double f = svm.bias;
    for (int i = 0; i < svm.support_vectors.rows; ++i)
        f += svm.dual_coeffs[i] * svm.kernel(x, svm.support_vectors.row(i));
    return f;
}

MulticlassScheme scheme_from_string(const std::string& s) {
    if (s == "one-vs-one" || s == "ovo") return MulticlassScheme::one_vs_one;
    if (s == "one-vs-rest" || s == "ovr") return MulticlassScheme::one_vs_rest;
    throw std::invalid_argument("unknown multiclass scheme: " + s);
}

const char* to_string(MulticlassScheme s) {
    return s == MulticlassScheme::one_vs_one ? "one-vs-one" : "one-vs-rest";
}

SvmModel train_multiclass(const Matrix& X, const std::vector<int>& labels,
                          const Kernel& kernel, double C, MulticlassScheme scheme,
                          const SmoOptions& opts, int jobs) {
    if (static_cast<int>(labels.size()) != X.rows)
        throw std::invalid_argument("train_multiclass: label count mismatch");

    SvmModel model;
    model.scheme = scheme;
    model.classes = labels;
    std::sort(model.classes.begin(), model.classes.end());
    model.classes.erase(std::unique(model.classes.begin(), model.classes.end()),
                        model.classes.end());
    if (model.classes.size() < 2)
        throw std::invalid_argument("train_multiclass: need at least 2 classes");

    if (scheme == MulticlassScheme::one_vs_rest) {
        for (int c : model.classes) model.binaries.push_back({c, -1, {}});
        parallel_for(model.binaries.size(), jobs, [&](std::size_t k) {
            const int c = model.binaries[k].positive;
            std::vector<int> y(labels.size());
            for (std::size_t i = 0; i < labels.size(); ++i) y[i] = labels[i] == c ? 1 : -1;
            model.binaries[k].svm = train_binary(X, y, kernel, C, opts);
        });
    } else {
        for (std::size_t a = 0; a < model.classes.size(); ++a)
            for (std::size_t b = a + 1; b < model.classes.size(); ++b)
                model.binaries.push_back({model.classes[a], model.classes[b], {}});
        parallel_for(model.binaries.size(), jobs, [&](std::size_t k) {
            const int ca = model.binaries[k].positive, cb = model.binaries[k].negative;
            std::vector<int> idx, y;
            for (std::size_t i = 0; i < labels.size(); ++i) {
                if (labels[i] == ca || labels[i] == cb) {
                    idx.push_back(static_cast<int>(i));
                    y.push_back(labels[i] == ca ? 1 : -1);
                }
            }
            Matrix sub(static_cast<int>(idx.size()), X.cols);
            for (std::size_t r = 0; r < idx.size(); ++r)
                std::copy(X.row(idx[r]).begin(), X.row(idx[r]).end(), sub.row(int(r)).begin());
            model.binaries[k].svm = train_binary(sub, y, kernel, C, opts);
        });
    }
    return model;
}

int predict(const SvmModel& model, std::span<const double> x) {
    const auto& classes = model.classes;
    if (model.scheme == MulticlassScheme::one_vs_rest) {
        int best = classes.front();
        double best_val = -std::numeric_limits<double>::infinity();
        for (const auto& bin : model.binaries) {
            const double v = decision(bin.svm, x);
            if (v > best_val) {
                best_val = v;
                best = bin.positive;
            }
        }
        return best;
    }

    std::vector<int> votes(classes.size(), 0);
    std::vector<double> margin(classes.size(), 0.0);
    auto index_of = [&](int label) {
        return std::lower_bound(classes.begin(), classes.end(), label) - classes.begin();
    };
    for (const auto& bin : model.binaries) {
        const double v = decision(bin.svm, x);
        const auto a = index_of(bin.positive), b = index_of(bin.negative);
        ++votes[v >= 0 ? a : b];
        margin[a] += v;
        margin[b] -= v;
    }
    int best = 0;
    for (std::size_t c = 1; c < classes.size(); ++c) {
        if (votes[c] > votes[best] ||
            (votes[c] == votes[best] && margin[c] > margin[best]))
            best = static_cast<int>(c);
    }
    return classes[best];
}

namespace {

nlohmann::json kernel_to_json(const Kernel& k) {
    switch (k.kind) {
        case Kernel::Kind::linear:
            return {{"kind", "linear"}};
        case Kernel::Kind::rbf:
            return {{"kind", "rbf"}, {"gamma", k.gamma}};
        default:
            return {{"kind", "polynomial"}, {"degree", k.degree}, {"coef", k.coef}};
    }
}

Kernel kernel_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind");
    if (kind == "linear") return Kernel::linear();
    if (kind == "rbf") return Kernel::rbf(j.at("gamma").get<double>());
    if (kind == "polynomial")
        return Kernel::polynomial(j.at("degree").get<int>(), j.at("coef").get<double>());
    throw std::runtime_error("unknown kernel kind: " + kind);
}

}  // namespace

void save_svm_json(const SvmModel& model, const std::filesystem::path& out) {
    nlohmann::json binaries = nlohmann::json::array();
    for (const auto& bin : model.binaries) {
        binaries.push_back({{"positive", bin.positive},
                            {"negative", bin.negative},
                            {"bias", bin.svm.bias},
                            {"C", bin.svm.C},
                            {"kernel", kernel_to_json(bin.svm.kernel)},
                            {"dim", bin.svm.support_vectors.cols},
                            {"dual_coeffs", bin.svm.dual_coeffs},
                            {"support_vectors", bin.svm.support_vectors.a}});
    }
    nlohmann::json j{{"format", "svm"},
                     {"version", 1},
                     {"scheme", to_string(model.scheme)},
                     {"classes", model.classes},
                     {"binaries", binaries}};
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out.string());
    f << j.dump(2) << '\n';
    if (!f.flush()) throw std::runtime_error("write failed: " + out.string());
}

SvmModel load_svm_json(const std::filesystem::path& in) {
    std::ifstream f(in);
    if (!f) throw std::runtime_error("cannot open " + in.string());
    nlohmann::json j = nlohmann::json::parse(f);
    if (j.at("format") != "svm" || j.at("version") != 1)
        throw std::runtime_error("unsupported svm model file: " + in.string());
    SvmModel model;
    model.scheme = scheme_from_string(j.at("scheme").get<std::string>());
    model.classes = j.at("classes").get<std::vector<int>>();
    for (const auto& bj : j.at("binaries")) {
        SvmModel::Binary bin;
        bin.positive = bj.at("positive").get<int>();
        bin.negative = bj.at("negative").get<int>();
        bin.svm.bias = bj.at("bias").get<double>();
        bin.svm.C = bj.at("C").get<double>();
        bin.svm.kernel = kernel_from_json(bj.at("kernel"));
        bin.svm.dual_coeffs = bj.at("dual_coeffs").get<std::vector<double>>();
        const int dim = bj.at("dim").get<int>();
        const auto flat = bj.at("support_vectors").get<std::vector<double>>();
        if (dim <= 0 || flat.size() != bin.svm.dual_coeffs.size() * std::size_t(dim))
            throw std::runtime_error("corrupt svm model file: " + in.string());
        bin.svm.support_vectors = Matrix(static_cast<int>(bin.svm.dual_coeffs.size()), dim);
        bin.svm.support_vectors.a = flat;
        model.binaries.push_back(std::move(bin));
    }
    return model;
}

}  // namespace scatface
