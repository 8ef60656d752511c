#include "scatface/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace scatface {

namespace {

Image center_crop_square(const Image& img) {
    int side = std::min(img.height, img.width);
    if (side == img.height && side == img.width) return img;
    int y0 = (img.height - side) / 2;
    int x0 = (img.width - side) / 2;
    Image out(side, side);
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x) out.at(y, x) = img.at(y0 + y, x0 + x);
    return out;
}

inline double lerp(double a, double b, double t) { return a + (b - a) * t; }

// Pixel-center mapping; sample coordinates clamped to the source rect, so
// constants are reproduced exactly and no pixel is invented at the border.
Image resample_bilinear(const Image& img, int side) {
    if (img.height == side && img.width == side) return img;
    Image out(side, side);
    double sy = static_cast<double>(img.height) / side;
    double sx = static_cast<double>(img.width) / side;
    for (int y = 0; y < side; ++y) {
        double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(img.height - 1));
        int y0 = static_cast<int>(fy);
        int y1 = std::min(y0 + 1, img.height - 1);
        double ty = fy - y0;
        for (int x = 0; x < side; ++x) {
            double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(img.width - 1));
            int x0 = static_cast<int>(fx);
            int x1 = std::min(x0 + 1, img.width - 1);
            double tx = fx - x0;
            double top = lerp(img.at(y0, x0), img.at(y0, x1), tx);
            double bot = lerp(img.at(y1, x0), img.at(y1, x1), tx);
            out.at(y, x) = lerp(top, bot, ty);
        }
    }
    return out;
}

}  // namespace

Image preprocess(const Image& img, int side) {
    if (side <= 0) throw std::invalid_argument("preprocess: side must be positive");
    if ((side & (side - 1)) != 0) throw std::invalid_argument("preprocess: side must be a power of two");
    if (img.height <= 0 || img.width <= 0) throw std::invalid_argument("preprocess: empty image");
    Image out = resample_bilinear(center_crop_square(img), side);
    for (double& v : out.pixels) v = std::clamp(v, 0.0, 1.0);
    return out;
}

}  // namespace scatface
