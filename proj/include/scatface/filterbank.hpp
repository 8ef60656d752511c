#pragma once

#include <vector>

namespace scatface {

/// Mother Morlet parameters.  slant = slant_scale / L stretches the Gaussian
/// envelope across the oscillation so angular selectivity tracks the
/// orientation count.
struct MorletParams {
    double sigma = 0.8;
    double xi = 2.356194490192344928846982537459627;  // 3*pi/4
    double slant_scale = 4.0;
};

/// Fourier-domain Morlet filter bank: J dilations x L rotations of the mother
/// wavelet plus one Gaussian low-pass at scale 2^J.  The Morlet transform is
/// real-valued in frequency, so filters are stored as real grids; the spatial
/// wavelets they induce are complex (analytic).
struct FilterBank {
    int side = 0;
    int J = 0;
    int L = 0;
    MorletParams params;
    std::vector<std::vector<double>> psi;  // J*L grids, index j*L + lambda
    std::vector<double> phi;
    double frame_lower = 0.0;
    double frame_upper = 0.0;

    const std::vector<double>& psi_hat(int j, int lambda) const {
        return psi[static_cast<std::size_t>(j) * L + lambda];
    }
};

/// Builds the bank on the side x side frequency grid.  Wavelet amplitudes are
/// normalized so the Littlewood-Paley upper bound is exactly 1, which makes
/// layer energies non-increasing.  Requires 2^J <= side and side a power of two.
FilterBank build_filterbank(int side, int J, int L, const MorletParams& params = {});

/// Pointwise Littlewood-Paley sum |phi|^2 + 1/2 sum(|psi(w)|^2 + |psi(-w)|^2)
/// over the frequency grid; its min/max equal the bank's frame bounds.
std::vector<double> littlewood_paley(const FilterBank& bank);

/// Signed frequency for bin k of an n-point grid, in (-pi, pi].
inline double grid_frequency(int k, int n) {
    int kk = k <= n / 2 ? k : k - n;
    return 6.283185307179586476925286766559 * kk / n;
}

}  // namespace scatface
