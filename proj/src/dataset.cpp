#include "scatface/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "scatface/image_io.hpp"
#include "scatface/rng.hpp"

namespace scatface {

namespace fs = std::filesystem;

Layout layout_from_string(const std::string& s) {
    if (s == "one-dir-per-class") return Layout::one_dir_per_class;
    if (s == "filename-prefix") return Layout::filename_prefix;
    throw std::invalid_argument("unknown dataset layout: " + s);
}

const char* to_string(Layout layout) {
    return layout == Layout::one_dir_per_class ? "one-dir-per-class" : "filename-prefix";
}

Dataset ingest(const fs::path& root, Layout layout) {
    if (!fs::is_directory(root))
        throw std::runtime_error("dataset root is not a directory: " + root.string());

    std::map<std::string, std::vector<fs::path>> by_class;
    if (layout == Layout::one_dir_per_class) {
        for (const auto& entry : fs::directory_iterator(root)) {
            if (!entry.is_directory()) continue;
            auto& files = by_class[entry.path().filename().string()];
            for (const auto& f : fs::directory_iterator(entry.path()))
                if (f.is_regular_file() && f.path().filename().string()[0] != '.')
                    files.push_back(f.path());
        }
    } else {
        for (const auto& entry : fs::directory_iterator(root)) {
            if (!entry.is_regular_file()) continue;
            const std::string name = entry.path().filename().string();
            if (name[0] == '.') continue;
            const auto dotpos = name.find('.');
            const std::string cls = name.substr(0, dotpos);  // "subject01.glasses" → "subject01"
            by_class[cls].push_back(entry.path());
        }
    }
    if (by_class.empty())
        throw std::runtime_error("no dataset found under " + root.string());

    Dataset ds;
    ds.name = root.filename().string();
    for (auto& [cls, files] : by_class) {
        if (files.empty())
            throw std::runtime_error("class '" + cls + "' has no images");
        ds.class_names.push_back(cls);
        const int label = static_cast<int>(ds.class_names.size()) - 1;
        std::sort(files.begin(), files.end());
        for (auto& f : files) ds.items.push_back({std::move(f), label});
    }
    std::sort(ds.items.begin(), ds.items.end(),
              [](const auto& a, const auto& b) { return a.path < b.path; });

    for (const auto& item : ds.items) load_image(item.path);  // validate; errors name the file
    return ds;
}

Split split(const Dataset& ds, const SplitSpec& spec, int repeat_index) {
    if (repeat_index < 0 || repeat_index >= spec.repeats)
        throw std::invalid_argument("split: repeat_index out of range");
    if (spec.count <= 0 && !(spec.fraction > 0 && spec.fraction < 1))
        throw std::invalid_argument("split: need count >= 1 or fraction in (0,1)");

    Split out;
    for (int label = 0; label < ds.num_classes(); ++label) {
        std::vector<int> members;
        for (int i = 0; i < static_cast<int>(ds.items.size()); ++i)
            if (ds.items[i].label == label) members.push_back(i);

        const int n = static_cast<int>(members.size());
        const int k = spec.count > 0
                          ? spec.count
                          : static_cast<int>(std::ceil(spec.fraction * n));
        if (k > n)
            throw std::runtime_error("split: class '" + ds.class_names[label] + "' has " +
                                     std::to_string(n) + " items, need " + std::to_string(k));

        KeyedRng rng(spec.seed, static_cast<std::uint64_t>(repeat_index),
                     static_cast<std::uint64_t>(label));
        for (int i = n - 1; i > 0; --i)
            std::swap(members[i], members[rng.next_below(i + 1)]);

        out.train.insert(out.train.end(), members.begin(), members.begin() + k);
        out.test.insert(out.test.end(), members.begin() + k, members.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

}  // namespace scatface
