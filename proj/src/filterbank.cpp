#include "scatface/filterbank.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace scatface {

namespace {

// Fourier transform of the zero-mean elliptical Morlet, evaluated at
// wavelet-frame coordinates (o1 along the oscillation, o2 across it):
//   psi_hat(o) = exp(-s^2((o1-xi)^2 + (o2/slant)^2)/2)
//              - beta * exp(-s^2(o1^2 + (o2/slant)^2)/2)
// with beta = exp(-s^2 xi^2 / 2) so psi_hat(0) = 0 identically.
struct Mother {
    double sigma, xi, slant, beta;

    Mother(const MorletParams& p, int L)
        : sigma(p.sigma), xi(p.xi), slant(p.slant_scale / L), beta(std::exp(-p.sigma * p.sigma * p.xi * p.xi / 2)) {}

    double operator()(double o1, double o2) const {
        double c = sigma * sigma / 2;
        double cross = (o2 / slant) * (o2 / slant);
        return std::exp(-c * ((o1 - xi) * (o1 - xi) + cross)) - beta * std::exp(-c * (o1 * o1 + cross));
    }
};

std::vector<double> sample_psi(int side, int j, double theta, const Mother& mother) {
    std::vector<double> out(static_cast<std::size_t>(side) * side);
    double scale = std::pow(2.0, j);
    double ct = std::cos(theta), st = std::sin(theta);
    for (int ky = 0; ky < side; ++ky) {
        double wy = grid_frequency(ky, side);
        for (int kx = 0; kx < side; ++kx) {
            double wx = grid_frequency(kx, side);
            double o1 = scale * (ct * wx + st * wy);
            double o2 = scale * (-st * wx + ct * wy);
            out[static_cast<std::size_t>(ky) * side + kx] = mother(o1, o2);
        }
    }
    return out;
}

// Gaussian low-pass at scale 2^J, alias-folded so the spatial kernel equals
// samples of a periodized (hence nonnegative) Gaussian, then renormalized to
// phi_hat(0) = 1 exactly.
std::vector<double> sample_phi(int side, int J, double sigma) {
    std::vector<double> out(static_cast<std::size_t>(side) * side, 0.0);
    double s = sigma * std::pow(2.0, J);
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    for (int ky = 0; ky < side; ++ky) {
        double wy = grid_frequency(ky, side);
        for (int kx = 0; kx < side; ++kx) {
            double wx = grid_frequency(kx, side);
            double sum = 0.0;
            for (int my = -2; my <= 2; ++my) {
                for (int mx = -2; mx <= 2; ++mx) {
                    double ax = s * (wx + kTwoPi * mx);
                    double ay = s * (wy + kTwoPi * my);
                    sum += std::exp(-(ax * ax + ay * ay) / 2);
                }
            }
            out[static_cast<std::size_t>(ky) * side + kx] = sum;
        }
    }
    double dc = out[0];
    for (double& v : out) v /= dc;
    return out;
}

std::size_t reflect_index(std::size_t idx, int side) {
    int ky = static_cast<int>(idx) / side;
    int kx = static_cast<int>(idx) % side;
    int ry = (side - ky) % side;
    int rx = (side - kx) % side;
    return static_cast<std::size_t>(ry) * side + rx;
}

std::vector<double> wavelet_energy(const FilterBank& bank) {
    std::size_t n = bank.phi.size();
    std::vector<double> w(n, 0.0);
    for (const auto& p : bank.psi) {
        for (std::size_t i = 0; i < n; ++i) {
            double v = p[i];
            double r = p[reflect_index(i, bank.side)];
            w[i] += 0.5 * (v * v + r * r);
        }
    }
    return w;
}

}  // namespace

FilterBank build_filterbank(int side, int J, int L, const MorletParams& params) {
    if (side <= 0 || (side & (side - 1)) != 0)
        throw std::invalid_argument("build_filterbank: side must be a positive power of two");
    if (J < 1 || L < 1) throw std::invalid_argument("build_filterbank: J and L must be positive");
    if ((1 << J) > side) throw std::invalid_argument("build_filterbank: 2^J exceeds side");

    FilterBank bank;
    bank.side = side;
    bank.J = J;
    bank.L = L;
    bank.params = params;
    bank.phi = sample_phi(side, J, params.sigma);

    Mother mother(params, L);
    bank.psi.reserve(static_cast<std::size_t>(J) * L);
    for (int j = 0; j < J; ++j)
        for (int l = 0; l < L; ++l)
            bank.psi.push_back(sample_psi(side, j, M_PI * l / L, mother));

    // amplitude = largest value keeping |phi|^2 + amp^2 * W <= 1 everywhere
    std::vector<double> w = wavelet_energy(bank);
    double amp2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] <= 0.0) continue;
        double headroom = 1.0 - bank.phi[i] * bank.phi[i];
        amp2 = std::min(amp2, headroom / w[i]);
    }
    if (!std::isfinite(amp2) || amp2 <= 0.0)
        throw std::runtime_error("build_filterbank: degenerate Littlewood-Paley normalization");
    double amp = std::sqrt(amp2);
    for (auto& p : bank.psi)
        for (double& v : p) v *= amp;

    std::vector<double> lp = littlewood_paley(bank);
    bank.frame_lower = std::numeric_limits<double>::infinity();
    bank.frame_upper = 0.0;
    for (double v : lp) {
        bank.frame_lower = std::min(bank.frame_lower, v);
        bank.frame_upper = std::max(bank.frame_upper, v);
    }
    return bank;
}

std::vector<double> littlewood_paley(const FilterBank& bank) {
    std::vector<double> lp = wavelet_energy(bank);
    for (std::size_t i = 0; i < lp.size(); ++i) lp[i] += bank.phi[i] * bank.phi[i];
    return lp;
}

}  // namespace scatface
