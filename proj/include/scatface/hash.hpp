#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>

namespace scatface {

// FNV-1a, 64-bit.  Stable across platforms and runs, unlike std::hash.
class Fnv1a {
public:
    void update(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h_ ^= p[i];
            h_ *= 1099511628211ull;
        }
    }
    void update(std::string_view s) { update(s.data(), s.size()); }
    std::uint64_t digest() const { return h_; }

private:
    std::uint64_t h_ = 14695981039346656037ull;
};

inline std::uint64_t fnv1a(const void* data, std::size_t n) {
    Fnv1a h;
    h.update(data, n);
    return h.digest();
}

/// Hash of a file's raw bytes.  Throws std::runtime_error if unreadable.
std::uint64_t hash_file(const std::filesystem::path& path);

}  // namespace scatface
