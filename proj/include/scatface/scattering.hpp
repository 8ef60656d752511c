#pragma once

#include <string>
#include <vector>

#include "scatface/filterbank.hpp"
#include "scatface/image.hpp"

namespace scatface {

/// Relative scale of successive wavelets along a path.  `decreasing` keeps
/// paths whose second wavelet is at a strictly finer scale (j2 < j1);
/// `increasing` keeps the opposite, the common convention elsewhere.  Both
/// enumerate the same number of paths.
enum class ScaleOrder { decreasing, increasing };

ScaleOrder scale_order_from_string(const std::string& s);
const char* to_string(ScaleOrder order);

/// One scattering path: the ordered (scale, orientation) pairs of the
/// wavelets applied before the final averaging.  Order 0 is the empty path.
struct ScatteringPath {
    std::vector<int> scales;
    std::vector<int> orientations;

    int order() const { return static_cast<int>(scales.size()); }
    std::string label() const;  // e.g. "o2.j3l0.j1l2"

    bool operator==(const ScatteringPath&) const = default;
};

/// All paths up to max_order in canonical order: lexicographic by
/// (order, scales, orientations).  Layer k contributes L^k * C(J, k) paths.
std::vector<ScatteringPath> enumerate_paths(int J, int L, int max_order,
                                            ScaleOrder order = ScaleOrder::decreasing);

struct ScatteringMaps {
    int side = 0;
    std::vector<ScatteringPath> paths;          // canonical order
    std::vector<std::vector<double>> maps;      // one grid per path

    std::size_t size() const { return maps.size(); }
};

/// Windowed scattering transform up to max_order (0..2).  The map for the
/// empty path is f*phi; deeper maps interleave wavelet convolution and
/// pointwise complex modulus before the final low-pass.  All convolutions are
/// circular, computed in the frequency domain.
ScatteringMaps scatter(const Image& img, const FilterBank& bank, int max_order,
                       ScaleOrder order = ScaleOrder::decreasing);

}  // namespace scatface
