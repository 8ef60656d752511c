#pragma once

#include <complex>
#include <vector>

namespace scatface {

using cplx = std::complex<double>;

/// Radix-2 FFT plan for a fixed power-of-two length.
class Fft {
public:
    explicit Fft(int n);  // throws std::invalid_argument unless n is a power of two

    int size() const { return n_; }

    /// In-place forward transform, no scaling.
    void forward(cplx* data) const { transform(data, false); }

    /// In-place inverse transform, scaled by 1/n.
    void inverse(cplx* data) const { transform(data, true); }

private:
    void transform(cplx* data, bool inv) const;

    int n_;
    std::vector<int> rev_;
    std::vector<cplx> twiddle_;  // exp(-2*pi*i*k/n), k < n/2
};

/// Plans for 2-D transforms on square side x side grids (row-major).
class Fft2 {
public:
    explicit Fft2(int side);

    int side() const { return line_.size(); }

    void forward(std::vector<cplx>& grid) const;
    void inverse(std::vector<cplx>& grid) const;

private:
    void rows(std::vector<cplx>& grid, bool inv) const;
    void cols(std::vector<cplx>& grid, bool inv) const;

    Fft line_;
};

}  // namespace scatface
