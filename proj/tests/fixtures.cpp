#include "fixtures.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace fixtures {

using scatface::Image;
using scatface::KeyedRng;

Image random_image(KeyedRng& rng, int side) {
    Image img(side, side);
    for (double& p : img.pixels) p = rng.next_unit();
    return img;
}

Image shifted(const Image& img, int dy, int dx) {
    Image out(img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            out.at((y + dy % img.height + img.height) % img.height,
                   (x + dx % img.width + img.width) % img.width) = img.at(y, x);
    return out;
}

void write_pgm8(const std::filesystem::path& path, const Image& img) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    for (double v : img.pixels)
        f.put(static_cast<char>(std::clamp(v, 0.0, 1.0) * 255.0 + 0.5));
    if (!f.flush()) throw std::runtime_error("write failed: " + path.string());
}

void make_prototype_dataset(const std::filesystem::path& root, int classes, int per_class,
                            int side, double noise_sigma, std::uint64_t seed) {
    std::filesystem::create_directories(root);
    for (int c = 0; c < classes; ++c) {
        KeyedRng proto_rng(seed, 0, c);
        const Image proto = random_image(proto_rng, side);
        const auto dir = root / ("class" + std::to_string(c));
        std::filesystem::create_directories(dir);
        for (int i = 0; i < per_class; ++i) {
            KeyedRng noise_rng(seed, 1000 + i, c);
            Image img = proto;
            for (double& p : img.pixels)
                p = std::clamp(p + noise_sigma * noise_rng.next_gaussian(), 0.0, 1.0);
            char name[32];
            std::snprintf(name, sizeof name, "img_%02d.pgm", i);
            write_pgm8(dir / name, img);
        }
    }
}

TempDir::TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    const auto base = std::filesystem::temp_directory_path();
    path_ = base / ("scatface_" + tag + "_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

}  // namespace fixtures
