#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "scatface/scattering.hpp"

namespace scatface {

struct FeatureVector {
    std::vector<double> values;  // (mean, variance) per path, canonical order
};

/// Σ_{k=0}^{max_order} 2·L^k·C(J,k)
int feature_length(int J, int L, int max_order = 2);

/// Spatial mean and population variance (1/N) of every map, in map order.
FeatureVector extract_features(const ScatteringMaps& maps);

/// A labelled set of feature vectors plus the parameters they were computed
/// with, so serialized matrices are self-describing.
struct FeatureMatrix {
    std::uint32_t J = 0, L = 0, side = 0, dim = 0;
    std::vector<std::int32_t> labels;
    std::vector<double> values;  // count × dim, row-major

    int count() const { return static_cast<int>(labels.size()); }
    std::span<const double> row(int i) const { return {values.data() + std::size_t(i) * dim, dim}; }
};

void save_features_csv(const FeatureMatrix& m, const std::filesystem::path& out);

/// Versioned binary container ("SFV1"); a trailing checksum covers the whole
/// payload so truncated or corrupted files are rejected on load.
void save_features_bin(const FeatureMatrix& m, const std::filesystem::path& out);
FeatureMatrix load_features_bin(const std::filesystem::path& in);

}  // namespace scatface
