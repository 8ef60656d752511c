#include "scatface/scattering.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>

#include "scatface/fft.hpp"

namespace scatface {

namespace {

// All strictly ordered scale k-tuples, lexicographically.  `decreasing`
// means each subsequent scale is finer (smaller index) than the previous.
void gen_scale_tuples(int J, int k, ScaleOrder order, std::vector<int>& cur,
                      std::vector<std::vector<int>>& out) {
    if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
    }
    for (int j = 0; j < J; ++j) {
        if (!cur.empty()) {
            const int prev = cur.back();
            if (order == ScaleOrder::decreasing ? j >= prev : j <= prev) continue;
        }
        cur.push_back(j);
        gen_scale_tuples(J, k, order, cur, out);
        cur.pop_back();
    }
}

void append_orientation_tuples(const std::vector<int>& scales, int L,
                               std::vector<ScatteringPath>& out) {
    const int k = static_cast<int>(scales.size());
    if (k == 0) {
        out.push_back(ScatteringPath{});
        return;
    }
    std::vector<int> lam(k, 0);
    while (true) {
        out.push_back(ScatteringPath{scales, lam});
        int pos = k - 1;
        while (pos >= 0 && ++lam[pos] == L) lam[pos--] = 0;
        if (pos < 0) break;
    }
}

}  // namespace

ScaleOrder scale_order_from_string(const std::string& s) {
    if (s == "decreasing") return ScaleOrder::decreasing;
    if (s == "increasing") return ScaleOrder::increasing;
    throw std::invalid_argument("unknown scale order: " + s);
}

const char* to_string(ScaleOrder order) {
    return order == ScaleOrder::decreasing ? "decreasing" : "increasing";
}

std::string ScatteringPath::label() const {
    std::string s = "o" + std::to_string(order());
    for (std::size_t i = 0; i < scales.size(); ++i)
        s += ".j" + std::to_string(scales[i]) + "l" + std::to_string(orientations[i]);
    return s;
}

std::vector<ScatteringPath> enumerate_paths(int J, int L, int max_order,
                                            ScaleOrder order) {
    if (J < 1 || L < 1) throw std::invalid_argument("enumerate_paths: J and L must be positive");
    if (max_order < 0 || max_order > 2)
        throw std::invalid_argument("enumerate_paths: max_order must be 0, 1, or 2");

    std::vector<ScatteringPath> paths;
    for (int k = 0; k <= max_order; ++k) {
        std::vector<std::vector<int>> tuples;
        std::vector<int> cur;
        gen_scale_tuples(J, k, order, cur, tuples);
        for (const auto& scales : tuples) append_orientation_tuples(scales, L, paths);
    }
    return paths;
}

ScatteringMaps scatter(const Image& img, const FilterBank& bank, int max_order,
                       ScaleOrder order) {
    if (img.height != bank.side || img.width != bank.side)
        throw std::invalid_argument("scatter: image size does not match filter bank side");

    const int side = bank.side;
    const int n2 = side * side;
    Fft2 fft(side);

    std::vector<std::complex<double>> spec(img.pixels.begin(), img.pixels.end());
    fft.forward(spec);

    // Spectrum of each first-order modulus |f*psi_{j1,l1}|, filled on demand.
    std::vector<std::vector<std::complex<double>>> u1_spec(bank.psi.size());

    std::vector<std::complex<double>> buf(n2);
    auto modulus_spectrum = [&](const std::vector<std::complex<double>>& in,
                                const std::vector<double>& filt) {
        for (int i = 0; i < n2; ++i) buf[i] = in[i] * filt[i];
        fft.inverse(buf);
        for (int i = 0; i < n2; ++i) buf[i] = std::abs(buf[i]);
        fft.forward(buf);
        return buf;
    };
    auto lowpass = [&](const std::vector<std::complex<double>>& in) {
        for (int i = 0; i < n2; ++i) buf[i] = in[i] * bank.phi[i];
        fft.inverse(buf);
        std::vector<double> out(n2);
        for (int i = 0; i < n2; ++i) out[i] = buf[i].real();
        return out;
    };
    auto first_order = [&](int j, int lambda) -> const std::vector<std::complex<double>>& {
        auto& slot = u1_spec[static_cast<std::size_t>(j) * bank.L + lambda];
        if (slot.empty()) slot = modulus_spectrum(spec, bank.psi_hat(j, lambda));
        return slot;
    };

    ScatteringMaps result;
    result.side = side;
    result.paths = enumerate_paths(bank.J, bank.L, max_order, order);
    result.maps.reserve(result.paths.size());

    for (const auto& path : result.paths) {
        switch (path.order()) {
            case 0:
                result.maps.push_back(lowpass(spec));
                break;
            case 1:
                result.maps.push_back(lowpass(first_order(path.scales[0], path.orientations[0])));
                break;
            default: {
                const auto& u1 = first_order(path.scales[0], path.orientations[0]);
                result.maps.push_back(
                    lowpass(modulus_spectrum(u1, bank.psi_hat(path.scales[1], path.orientations[1]))));
            }
        }
    }
    return result;
}

}  // namespace scatface
