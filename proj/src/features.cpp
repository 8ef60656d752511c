#include "scatface/features.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "scatface/hash.hpp"

namespace scatface {

namespace {

constexpr char kMagic[4] = {'S', 'F', 'V', '1'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& buf, std::size_t& pos) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(buf[pos++])) << (8 * i);
    return v;
}

[[noreturn]] void bad(const std::filesystem::path& p, const char* why) {
    throw std::runtime_error("feature container " + p.string() + ": " + why);
}

}  // namespace

int feature_length(int J, int L, int max_order) {
    if (J < 1 || L < 1) throw std::invalid_argument("feature_length: J and L must be positive");
    long long total = 0, binom = 1, lpow = 1;
    for (int k = 0; k <= max_order; ++k) {
        total += 2 * lpow * binom;
        binom = binom * (J - k) / (k + 1);  // C(J,k+1)
        lpow *= L;
    }
    return static_cast<int>(total);
}

FeatureVector extract_features(const ScatteringMaps& maps) {
    if (maps.maps.empty()) throw std::invalid_argument("extract_features: no maps");
    FeatureVector fv;
    fv.values.reserve(2 * maps.maps.size());
    const double n = static_cast<double>(maps.side) * maps.side;
    for (const auto& map : maps.maps) {
        double sum = 0;
        for (double v : map) sum += v;
        const double mean = sum / n;
        double ss = 0;
        for (double v : map) ss += (v - mean) * (v - mean);
        fv.values.push_back(mean);
        fv.values.push_back(ss / n);
    }
    return fv;
}

void save_features_csv(const FeatureMatrix& m, const std::filesystem::path& out) {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out.string());
    f.precision(17);
    for (int i = 0; i < m.count(); ++i) {
        f << m.labels[i];
        for (double v : m.row(i)) f << ',' << v;
        f << '\n';
    }
    if (!f.flush()) throw std::runtime_error("write failed: " + out.string());
}

void save_features_bin(const FeatureMatrix& m, const std::filesystem::path& out) {
    if (m.values.size() != std::size_t(m.count()) * m.dim)
        throw std::invalid_argument("feature matrix shape mismatch");
    std::string buf;
    buf.append(kMagic, 4);
    put_u32(buf, kVersion);
    put_u32(buf, m.J);
    put_u32(buf, m.L);
    put_u32(buf, m.side);
    put_u32(buf, m.dim);
    put_u32(buf, static_cast<std::uint32_t>(m.count()));
    for (auto lab : m.labels) put_u32(buf, static_cast<std::uint32_t>(lab));
    const std::size_t data_off = buf.size();
    buf.resize(buf.size() + m.values.size() * sizeof(double));
    std::memcpy(buf.data() + data_off, m.values.data(), m.values.size() * sizeof(double));

    Fnv1a h;
    h.update(buf.data(), buf.size());
    std::uint64_t sum = h.digest();
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((sum >> (8 * i)) & 0xff));

    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + out.string());
    f.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!f.flush()) throw std::runtime_error("write failed: " + out.string());
}

FeatureMatrix load_features_bin(const std::filesystem::path& in) {
    std::ifstream f(in, std::ios::binary);
    if (!f) bad(in, "cannot open");
    std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

    if (buf.size() < 28 + 8) bad(in, "truncated");
    Fnv1a h;
    h.update(buf.data(), buf.size() - 8);
    std::uint64_t want = 0;
    for (int i = 0; i < 8; ++i)
        want |= std::uint64_t(static_cast<unsigned char>(buf[buf.size() - 8 + i])) << (8 * i);
    if (h.digest() != want) bad(in, "checksum mismatch");

    std::size_t pos = 0;
    if (std::memcmp(buf.data(), kMagic, 4) != 0) bad(in, "bad magic");
    pos = 4;
    if (get_u32(buf, pos) != kVersion) bad(in, "unsupported version");

    FeatureMatrix m;
    m.J = get_u32(buf, pos);
    m.L = get_u32(buf, pos);
    m.side = get_u32(buf, pos);
    m.dim = get_u32(buf, pos);
    const std::uint32_t count = get_u32(buf, pos);
    const std::size_t need = pos + 4ull * count + sizeof(double) * m.dim * count + 8;
    if (buf.size() != need) bad(in, "size mismatch");
    m.labels.resize(count);
    for (auto& lab : m.labels) lab = static_cast<std::int32_t>(get_u32(buf, pos));
    m.values.resize(std::size_t(m.dim) * count);
    std::memcpy(m.values.data(), buf.data() + pos, m.values.size() * sizeof(double));
    return m;
}

}  // namespace scatface
