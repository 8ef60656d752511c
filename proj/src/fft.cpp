#include "scatface/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace scatface {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

Fft::Fft(int n) : n_(n) {
    if (n <= 0 || (n & (n - 1)) != 0) throw std::invalid_argument("Fft: length must be a power of two");
    rev_.resize(n);
    int log2n = 0;
    while ((1 << log2n) < n) ++log2n;
    for (int i = 0; i < n; ++i) {
        int r = 0;
        for (int b = 0; b < log2n; ++b)
            if (i & (1 << b)) r |= 1 << (log2n - 1 - b);
        rev_[i] = r;
    }
    twiddle_.resize(n / 2);
    for (int k = 0; k < n / 2; ++k)
        twiddle_[k] = std::polar(1.0, -kTwoPi * k / n);
}

void Fft::transform(cplx* data, bool inv) const {
    for (int i = 0; i < n_; ++i)
        if (i < rev_[i]) std::swap(data[i], data[rev_[i]]);
    for (int len = 2; len <= n_; len <<= 1) {
        int half = len >> 1;
        int step = n_ / len;  // twiddle stride
        for (int start = 0; start < n_; start += len) {
            for (int k = 0; k < half; ++k) {
                cplx w = twiddle_[k * step];
                if (inv) w = std::conj(w);
                cplx& a = data[start + k];
                cplx& b = data[start + k + half];
                cplx t = b * w;
                b = a - t;
                a += t;
            }
        }
    }
    if (inv) {
        double s = 1.0 / n_;
        for (int i = 0; i < n_; ++i) data[i] *= s;
    }
}

Fft2::Fft2(int side) : line_(side) {}

void Fft2::rows(std::vector<cplx>& grid, bool inv) const {
    int n = line_.size();
    for (int y = 0; y < n; ++y) {
        cplx* row = grid.data() + static_cast<std::size_t>(y) * n;
        if (inv)
            line_.inverse(row);
        else
            line_.forward(row);
    }
}

void Fft2::cols(std::vector<cplx>& grid, bool inv) const {
    int n = line_.size();
    std::vector<cplx> col(n);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) col[y] = grid[static_cast<std::size_t>(y) * n + x];
        if (inv)
            line_.inverse(col.data());
        else
            line_.forward(col.data());
        for (int y = 0; y < n; ++y) grid[static_cast<std::size_t>(y) * n + x] = col[y];
    }
}

void Fft2::forward(std::vector<cplx>& grid) const {
    if (grid.size() != static_cast<std::size_t>(line_.size()) * line_.size())
        throw std::invalid_argument("Fft2: grid size mismatch");
    rows(grid, false);
    cols(grid, false);
}

void Fft2::inverse(std::vector<cplx>& grid) const {
    if (grid.size() != static_cast<std::size_t>(line_.size()) * line_.size())
        throw std::invalid_argument("Fft2: grid size mismatch");
    rows(grid, true);
    cols(grid, true);
}

}  // namespace scatface
