#include "scatface/image_io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace scatface {

namespace {

constexpr double kLumaR = 0.299;
constexpr double kLumaG = 0.587;
constexpr double kLumaB = 0.114;

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

Image from_gray_rows(const std::vector<std::uint8_t>& buf, int h, int w, int channels) {
    Image img(h, w);
    const std::uint8_t* p = buf.data();
    for (std::size_t i = 0; i < img.pixels.size(); ++i, p += channels) {
        if (channels == 1) {
            img.pixels[i] = p[0] / 255.0;
        } else {
            img.pixels[i] = (kLumaR * p[0] + kLumaG * p[1] + kLumaB * p[2]) / 255.0;
        }
    }
    return img;
}

// ---- PGM (binary P5) ----

int pgm_token(std::istream& in) {
    // skips whitespace and '#' comments, then reads one unsigned decimal
    int c = in.get();
    for (;;) {
        while (c != EOF && std::isspace(c)) c = in.get();
        if (c == '#') {
            while (c != EOF && c != '\n') c = in.get();
            continue;
        }
        break;
    }
    if (c == EOF || !std::isdigit(c)) return -1;
    long v = 0;
    while (c != EOF && std::isdigit(c)) {
        v = v * 10 + (c - '0');
        if (v > 1 << 30) return -1;
        c = in.get();
    }
    return static_cast<int>(v);
}

Image load_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(io_errc::unreadable_file, path, "cannot open");
    char magic[2];
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5')
        throw io_error(io_errc::unsupported_format, path, "not a binary PGM");
    int w = pgm_token(in);
    int h = pgm_token(in);
    int maxval = pgm_token(in);
    if (w < 0 || h < 0 || maxval <= 0 || maxval > 65535)
        throw io_error(io_errc::unreadable_file, path, "bad PGM header");
    if (w == 0 || h == 0) throw io_error(io_errc::zero_sized_image, path, "zero-sized image");
    // header ends with exactly one whitespace byte, already consumed by the
    // last token read; raster follows
    std::size_t n = static_cast<std::size_t>(w) * h;
    int bytes = maxval > 255 ? 2 : 1;
    std::vector<std::uint8_t> raw(n * bytes);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (static_cast<std::size_t>(in.gcount()) != raw.size())
        throw io_error(io_errc::unreadable_file, path, "truncated PGM raster");
    Image img(h, w);
    for (std::size_t i = 0; i < n; ++i) {
        unsigned v = bytes == 1 ? raw[i] : (static_cast<unsigned>(raw[2 * i]) << 8) | raw[2 * i + 1];
        img.pixels[i] = static_cast<double>(v) / maxval;
    }
    return img;
}

// ---- PNG ----

struct PngReadGuard {
    png_structp png = nullptr;
    png_infop info = nullptr;
    ~PngReadGuard() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    }
};

Image load_png(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw io_error(io_errc::unreadable_file, path, "cannot open");

    PngReadGuard g;
    g.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!g.png) throw io_error(io_errc::unreadable_file, path, "libpng init failed");
    g.info = png_create_info_struct(g.png);
    if (!g.info) throw io_error(io_errc::unreadable_file, path, "libpng init failed");

    if (setjmp(png_jmpbuf(g.png))) throw io_error(io_errc::unreadable_file, path, "corrupt PNG");

    png_init_io(g.png, fp.get());
    png_read_info(g.png, g.info);

    png_uint_32 w = png_get_image_width(g.png, g.info);
    png_uint_32 h = png_get_image_height(g.png, g.info);
    if (w == 0 || h == 0) throw io_error(io_errc::zero_sized_image, path, "zero-sized image");

    int color = png_get_color_type(g.png, g.info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(g.png);
    if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(g.png, g.info) < 8)
        png_set_expand_gray_1_2_4_to_8(g.png);
    if (png_get_valid(g.png, g.info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(g.png);
    if (png_get_bit_depth(g.png, g.info) == 16) png_set_strip_16(g.png);
    png_set_strip_alpha(g.png);
    png_read_update_info(g.png, g.info);

    int channels = png_get_channels(g.png, g.info);
    if (channels != 1 && channels != 3)
        throw io_error(io_errc::unsupported_format, path, "unexpected PNG channel count");

    std::vector<std::uint8_t> buf(static_cast<std::size_t>(h) * w * channels);
    std::vector<png_bytep> rows(h);
    for (png_uint_32 y = 0; y < h; ++y)
        rows[y] = buf.data() + static_cast<std::size_t>(y) * w * channels;
    png_read_image(g.png, rows.data());
    png_read_end(g.png, nullptr);

    return from_gray_rows(buf, static_cast<int>(h), static_cast<int>(w), channels);
}

// ---- JPEG ----

struct JpegErrorMgr {
    jpeg_error_mgr base;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
    auto* mgr = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
    std::longjmp(mgr->jump, 1);
}

Image load_jpeg(const std::filesystem::path& path) {
    FilePtr fp(std::fopen(path.c_str(), "rb"));
    if (!fp) throw io_error(io_errc::unreadable_file, path, "cannot open");

    jpeg_decompress_struct cinfo;
    JpegErrorMgr err;
    cinfo.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&cinfo);
        throw io_error(io_errc::unreadable_file, path, "corrupt JPEG");
    }
    jpeg_create_decompress(&cinfo);
    jpeg_stdio_src(&cinfo, fp.get());
    jpeg_read_header(&cinfo, TRUE);
    cinfo.out_color_space = cinfo.num_components == 1 ? JCS_GRAYSCALE : JCS_RGB;
    jpeg_start_decompress(&cinfo);

    int w = static_cast<int>(cinfo.output_width);
    int h = static_cast<int>(cinfo.output_height);
    int channels = cinfo.output_components;
    if (w == 0 || h == 0) {
        jpeg_destroy_decompress(&cinfo);
        throw io_error(io_errc::zero_sized_image, path, "zero-sized image");
    }
    std::vector<std::uint8_t> buf(static_cast<std::size_t>(h) * w * channels);
    while (cinfo.output_scanline < cinfo.output_height) {
        JSAMPROW row = buf.data() + static_cast<std::size_t>(cinfo.output_scanline) * w * channels;
        jpeg_read_scanlines(&cinfo, &row, 1);
    }
    jpeg_finish_decompress(&cinfo);
    jpeg_destroy_decompress(&cinfo);

    return from_gray_rows(buf, h, w, channels);
}

}  // namespace

std::string io_error::describe(io_errc code, const std::filesystem::path& path, const std::string& detail) {
    const char* what = "";
    switch (code) {
        case io_errc::unreadable_file: what = "unreadable file"; break;
        case io_errc::unsupported_format: what = "unsupported format"; break;
        case io_errc::zero_sized_image: what = "zero-sized image"; break;
    }
    return std::string(what) + ": " + path.string() + (detail.empty() ? "" : " (" + detail + ")");
}

Image load_image(const std::filesystem::path& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw io_error(io_errc::unreadable_file, path, "cannot open");
    unsigned char sig[8] = {};
    probe.read(reinterpret_cast<char*>(sig), 8);
    std::streamsize got = probe.gcount();
    probe.close();

    if (got >= 2 && sig[0] == 'P' && sig[1] == '5') return load_pgm(path);
    if (got >= 8 && png_sig_cmp(sig, 0, 8) == 0) return load_png(path);
    if (got >= 3 && sig[0] == 0xFF && sig[1] == 0xD8 && sig[2] == 0xFF) return load_jpeg(path);
    throw io_error(io_errc::unsupported_format, path, "unknown signature");
}

void save_png_gray8(const std::filesystem::path& path, const Image& img) {
    std::vector<std::uint8_t> bytes(img.pixels.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        double v = std::clamp(img.pixels[i], 0.0, 1.0);
        bytes[i] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }

    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw io_error(io_errc::unreadable_file, path, "cannot open for write");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw io_error(io_errc::unreadable_file, path, "PNG write failed");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, img.width, img.height, 8, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < img.height; ++y)
        png_write_row(png, const_cast<png_bytep>(bytes.data() + static_cast<std::size_t>(y) * img.width));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

void save_png_rgb8(const std::filesystem::path& path, int height, int width,
                   const std::vector<std::uint8_t>& rgb) {
    if (rgb.size() != static_cast<std::size_t>(height) * width * 3)
        throw std::invalid_argument("save_png_rgb8: buffer size mismatch");
    FilePtr fp(std::fopen(path.c_str(), "wb"));
    if (!fp) throw io_error(io_errc::unreadable_file, path, "cannot open for write");
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw io_error(io_errc::unreadable_file, path, "PNG write failed");
    }
    png_init_io(png, fp.get());
    png_set_IHDR(png, info, width, height, 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (int y = 0; y < height; ++y)
        png_write_row(png, const_cast<png_bytep>(rgb.data() + static_cast<std::size_t>(y) * width * 3));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
}

}  // namespace scatface
