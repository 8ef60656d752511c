#include "scatface/hash.hpp"

#include <fstream>
#include <stdexcept>

namespace scatface {

std::uint64_t hash_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("hash_file: cannot open " + path.string());
    Fnv1a h;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        h.update(buf, static_cast<std::size_t>(in.gcount()));
    }
    if (in.bad()) throw std::runtime_error("hash_file: read error on " + path.string());
    return h.digest();
}

}  // namespace scatface
