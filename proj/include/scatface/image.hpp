#pragma once

#include <vector>

namespace scatface {

/// Grayscale image, row-major, intensities in [0, 1].
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> pixels;

    Image() = default;
    Image(int h, int w) : height(h), width(w), pixels(static_cast<std::size_t>(h) * w, 0.0) {}

    double& at(int y, int x) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    double at(int y, int x) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

/// Center-crops to square, bilinearly resamples to side x side, and clamps
/// intensities back into [0, 1].  Idempotent once the image is at the target
/// size: resampling at identical resolution is an exact copy.
Image preprocess(const Image& img, int side);

}  // namespace scatface
