#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scatface/dataset.hpp"
#include "scatface/features.hpp"
#include "scatface/filterbank.hpp"
#include "scatface/scattering.hpp"
#include "scatface/svm.hpp"

namespace scatface {

struct ExperimentConfig {
    std::string name = "experiment";
    std::filesystem::path dataset_root;
    Layout layout = Layout::one_dir_per_class;

    int side = 64;
    int J = 5;
    int L = 6;
    int max_order = 2;
    ScaleOrder scale_order = ScaleOrder::decreasing;
    MorletParams morlet;
    std::string variance = "population";  // recorded so serialized features are self-describing

    SplitSpec split;
    std::vector<int> k_list = {10, 25, 50, 75, 100, 150, 200};
    Kernel kernel;
    double C = 1.0;
    MulticlassScheme scheme = MulticlassScheme::one_vs_one;

    std::filesystem::path out_dir = "out";
    std::filesystem::path cache_dir;  // defaults to out_dir/"cache"
    int jobs = 1;

    std::filesystem::path effective_cache_dir() const {
        return cache_dir.empty() ? out_dir / "cache" : cache_dir;
    }
};

/// Parses a `key = value` file ('#' comments).  Unknown keys are errors.
ExperimentConfig load_config(const std::filesystem::path& path);
void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value);
void validate_config(const ExperimentConfig& cfg);

struct ResultRow {
    int K;
    int repeat;
    double accuracy;
};

struct Aggregate {
    int K;
    double mean, stddev;  // population std over repeats
    int n;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::vector<Aggregate> aggregates() const;
};

/// Per-image feature store keyed by (content hash, scattering-parameter
/// hash).  Entries failing their checksum are treated as misses and rewritten.
class FeatureCache {
public:
    FeatureCache(std::filesystem::path dir, const ExperimentConfig& cfg);

    std::optional<std::vector<double>> load(std::uint64_t content_hash) const;
    void store(std::uint64_t content_hash, const std::vector<double>& values);

    long hits = 0;
    long misses = 0;

private:
    std::filesystem::path entry_path(std::uint64_t content_hash) const;

    std::filesystem::path dir_;
    std::uint64_t params_hash_;
    std::uint32_t J_, L_, side_, dim_;
};

/// Hash of every knob that changes feature values; part of each cache key.
std::uint64_t scattering_params_hash(const ExperimentConfig& cfg);

/// Scattering features for every dataset item, cache-backed, fanned out
/// across `cfg.jobs` workers.
FeatureMatrix extract_all(const Dataset& ds, const ExperimentConfig& cfg, FeatureCache* cache);

/// Full protocol: per repeat, split → fit PCA on the training rows → for each
/// K project, train the SVM, and score.  Writes sweep.csv, runs.csv, and
/// splits.csv under cfg.out_dir.
ResultTable run_experiment(const ExperimentConfig& cfg);

/// sweep.csv (K,mean_accuracy,std_accuracy,n_repeats) + runs.csv (K,repeat,accuracy).
void sweep_report(const ResultTable& table, const std::filesystem::path& out_dir);

ResultTable load_runs_csv(const std::filesystem::path& runs_csv);

}  // namespace scatface
