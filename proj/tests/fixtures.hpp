#pragma once

#include <filesystem>
#include <string>

#include "scatface/image.hpp"
#include "scatface/linalg.hpp"
#include "scatface/rng.hpp"

namespace fixtures {

scatface::Image random_image(scatface::KeyedRng& rng, int side);

// Circular shift by (dy, dx).
scatface::Image shifted(const scatface::Image& img, int dy, int dx);

void write_pgm8(const std::filesystem::path& path, const scatface::Image& img);

// root/<class_0..classes-1>/img_*.pgm where every class is one fixed random
// prototype plus per-image Gaussian pixel noise.
void make_prototype_dataset(const std::filesystem::path& root, int classes, int per_class,
                            int side, double noise_sigma, std::uint64_t seed);

// Scoped temp directory, recursively removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

}  // namespace fixtures
