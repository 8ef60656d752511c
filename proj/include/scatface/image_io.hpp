#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "scatface/image.hpp"

namespace scatface {

enum class io_errc {
    unreadable_file,     // missing, truncated, or undecodable payload
    unsupported_format,  // not PGM (P5) / PNG / JPEG
    zero_sized_image,    // decoded header declares 0 width or height
};

class io_error : public std::runtime_error {
public:
    io_error(io_errc code, const std::filesystem::path& path, const std::string& detail)
        : std::runtime_error(describe(code, path, detail)), code_(code), path_(path) {}

    io_errc code() const { return code_; }
    const std::filesystem::path& path() const { return path_; }

private:
    static std::string describe(io_errc code, const std::filesystem::path& path, const std::string& detail);
    io_errc code_;
    std::filesystem::path path_;
};

/// Loads a PGM (binary P5), PNG, or JPEG image as grayscale in [0, 1].
/// Color inputs are converted with Rec. 601 luminance weights.
Image load_image(const std::filesystem::path& path);

/// Writes an image as an 8-bit grayscale PNG; values are clamped to [0, 1].
void save_png_gray8(const std::filesystem::path& path, const Image& img);

/// Writes interleaved 8-bit RGB rows as a PNG.
void save_png_rgb8(const std::filesystem::path& path, int height, int width,
                   const std::vector<std::uint8_t>& rgb);

}  // namespace scatface
