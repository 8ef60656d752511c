#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace scatface {

enum class Layout { one_dir_per_class, filename_prefix };

Layout layout_from_string(const std::string& s);
const char* to_string(Layout layout);

struct Dataset {
    std::string name;
    std::vector<std::string> class_names;  // sorted; label = position
    struct Item {
        std::filesystem::path path;
        int label;
    };
    std::vector<Item> items;  // lexicographic by path

    int num_classes() const { return static_cast<int>(class_names.size()); }
};

/// Scans `root/<class>/<image>` or flat `<class>.<rest>` files, checks every
/// image decodes, and assigns labels by sorted class name.
Dataset ingest(const std::filesystem::path& root, Layout layout);

struct SplitSpec {
    int count = 0;         // per-class train count; 0 means use fraction
    double fraction = 0;   // per-class train fraction (ceil), when count == 0
    std::uint64_t seed = 0;
    int repeats = 1;
};

struct Split {
    std::vector<int> train;  // item indices, ascending
    std::vector<int> test;
};

/// Seeded per-class partition.  Each class is shuffled by a stream keyed on
/// (seed, repeat_index, label), so one class's draw never shifts another's.
Split split(const Dataset& ds, const SplitSpec& spec, int repeat_index);

}  // namespace scatface
