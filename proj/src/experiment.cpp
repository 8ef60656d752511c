#include "scatface/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "scatface/hash.hpp"
#include "scatface/image.hpp"
#include "scatface/image_io.hpp"
#include "scatface/parallel.hpp"
#include "scatface/pca.hpp"

namespace scatface {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (!tok.empty()) out.push_back(std::stoi(tok));
    }
    return out;
}

Kernel parse_kernel(const std::string& s) {
    if (s == "linear") return Kernel::linear();
    if (s.rfind("rbf:", 0) == 0) return Kernel::rbf(std::stod(s.substr(4)));
    if (s.rfind("poly:", 0) == 0) {
        const auto rest = s.substr(5);
        const auto colon = rest.find(':');
        const int degree = std::stoi(rest.substr(0, colon));
        const double coef = colon == std::string::npos ? 0.0 : std::stod(rest.substr(colon + 1));
        return Kernel::polynomial(degree, coef);
    }
    throw std::invalid_argument("unknown kernel: " + s + " (use linear, rbf:G, poly:D[:R])");
}

Matrix take_rows(const FeatureMatrix& m, const std::vector<int>& idx) {
    Matrix out(static_cast<int>(idx.size()), static_cast<int>(m.dim));
    for (std::size_t r = 0; r < idx.size(); ++r) {
        auto src = m.row(idx[r]);
        std::copy(src.begin(), src.end(), out.row(static_cast<int>(r)).begin());
    }
    return out;
}

void write_accuracy(std::ofstream& f, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    f << buf;
}

}  // namespace

void apply_config_line(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "name") cfg.name = value;
    else if (key == "dataset_root") cfg.dataset_root = value;
    else if (key == "layout") cfg.layout = layout_from_string(value);
    else if (key == "side") cfg.side = std::stoi(value);
    else if (key == "J") cfg.J = std::stoi(value);
    else if (key == "L") cfg.L = std::stoi(value);
    else if (key == "max_order") cfg.max_order = std::stoi(value);
    else if (key == "scale_order") cfg.scale_order = scale_order_from_string(value);
    else if (key == "variance") cfg.variance = value;
    else if (key == "train_count") { cfg.split.count = std::stoi(value); cfg.split.fraction = 0; }
    else if (key == "train_fraction") { cfg.split.fraction = std::stod(value); cfg.split.count = 0; }
    else if (key == "seed") cfg.split.seed = std::stoull(value);
    else if (key == "repeats") cfg.split.repeats = std::stoi(value);
    else if (key == "k_list") cfg.k_list = parse_int_list(value);
    else if (key == "kernel") cfg.kernel = parse_kernel(value);
    else if (key == "C") cfg.C = std::stod(value);
    else if (key == "scheme") cfg.scheme = scheme_from_string(value);
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "cache_dir") cfg.cache_dir = value;
    else if (key == "jobs") cfg.jobs = std::stoi(value);
    else throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config " + path.string());
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) +
                                     ": expected key = value");
        try {
            apply_config_line(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": " +
                                     e.what());
        }
    }
    return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.side < 2 || (cfg.side & (cfg.side - 1)) != 0)
        throw std::invalid_argument("config: side must be a power of two >= 2");
    if (cfg.J < 1 || cfg.L < 1) throw std::invalid_argument("config: J and L must be positive");
    if ((1 << cfg.J) > cfg.side) throw std::invalid_argument("config: 2^J must not exceed side");
    if (cfg.max_order < 0 || cfg.max_order > 2)
        throw std::invalid_argument("config: max_order must be 0, 1, or 2");
    if (cfg.variance != "population")
        throw std::invalid_argument("config: only population variance is implemented");
    if (cfg.k_list.empty() || cfg.k_list.front() < 1 ||
        std::adjacent_find(cfg.k_list.begin(), cfg.k_list.end(), std::greater_equal<int>()) !=
            cfg.k_list.end())
        throw std::invalid_argument("config: k_list must be strictly ascending positive integers");
    if (cfg.split.count <= 0 && !(cfg.split.fraction > 0 && cfg.split.fraction < 1))
        throw std::invalid_argument("config: set train_count >= 1 or train_fraction in (0,1)");
    if (cfg.split.repeats < 1) throw std::invalid_argument("config: repeats must be >= 1");
    if (cfg.C <= 0) throw std::invalid_argument("config: C must be positive");
    if (cfg.jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
}

std::uint64_t scattering_params_hash(const ExperimentConfig& cfg) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "side=%d;J=%d;L=%d;max_order=%d;scale_order=%s;variance=%s;"
                  "sigma=%.17g;xi=%.17g;slant_scale=%.17g",
                  cfg.side, cfg.J, cfg.L, cfg.max_order, to_string(cfg.scale_order),
                  cfg.variance.c_str(), cfg.morlet.sigma, cfg.morlet.xi,
                  cfg.morlet.slant_scale);
    return fnv1a(buf, std::strlen(buf));
}

FeatureCache::FeatureCache(fs::path dir, const ExperimentConfig& cfg)
    : dir_(std::move(dir)),
      params_hash_(scattering_params_hash(cfg)),
      J_(cfg.J),
      L_(cfg.L),
      side_(cfg.side),
      dim_(feature_length(cfg.J, cfg.L, cfg.max_order)) {
    fs::create_directories(dir_);
}

fs::path FeatureCache::entry_path(std::uint64_t content_hash) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%016llx-%016llx.sfv",
                  static_cast<unsigned long long>(content_hash),
                  static_cast<unsigned long long>(params_hash_));
    return dir_ / buf;
}

std::optional<std::vector<double>> FeatureCache::load(std::uint64_t content_hash) const {
    const fs::path p = entry_path(content_hash);
    if (!fs::exists(p)) return std::nullopt;
    try {
        FeatureMatrix m = load_features_bin(p);
        if (m.dim != dim_ || m.count() != 1) throw std::runtime_error("wrong shape");
        return std::vector<double>(m.values.begin(), m.values.end());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "cache: discarding %s (%s)\n", p.string().c_str(), e.what());
        return std::nullopt;
    }
}

void FeatureCache::store(std::uint64_t content_hash, const std::vector<double>& values) {
    FeatureMatrix m;
    m.J = J_;
    m.L = L_;
    m.side = side_;
    m.dim = dim_;
    m.labels = {0};
    m.values = values;
    save_features_bin(m, entry_path(content_hash));
}

FeatureMatrix extract_all(const Dataset& ds, const ExperimentConfig& cfg, FeatureCache* cache) {
    const int dim = feature_length(cfg.J, cfg.L, cfg.max_order);
    FeatureMatrix out;
    out.J = cfg.J;
    out.L = cfg.L;
    out.side = cfg.side;
    out.dim = dim;
    out.labels.resize(ds.items.size());
    out.values.assign(ds.items.size() * std::size_t(dim), 0.0);

    const FilterBank bank = build_filterbank(cfg.side, cfg.J, cfg.L, cfg.morlet);
    std::mutex cache_mutex;

    parallel_for(ds.items.size(), cfg.jobs, [&](std::size_t i) {
        out.labels[i] = ds.items[i].label;
        std::vector<double> values;
        std::uint64_t content = 0;
        if (cache) {
            content = hash_file(ds.items[i].path);
            std::lock_guard lock(cache_mutex);
            if (auto hit = cache->load(content)) {
                ++cache->hits;
                values = std::move(*hit);
            } else {
                ++cache->misses;
            }
        }
        if (values.empty()) {
            const Image img = preprocess(load_image(ds.items[i].path), cfg.side);
            values = extract_features(scatter(img, bank, cfg.max_order, cfg.scale_order)).values;
            if (cache) {
                std::lock_guard lock(cache_mutex);
                cache->store(content, values);
            }
        }
        std::copy(values.begin(), values.end(), out.values.begin() + i * std::size_t(dim));
    });
    return out;
}

std::vector<Aggregate> ResultTable::aggregates() const {
    std::map<int, std::vector<double>> by_k;
    for (const auto& row : rows) by_k[row.K].push_back(row.accuracy);
    std::vector<Aggregate> out;
    for (const auto& [k, accs] : by_k) {
        double mean = 0;
        for (double a : accs) mean += a;
        mean /= accs.size();
        double var = 0;
        for (double a : accs) var += (a - mean) * (a - mean);
        var /= accs.size();
        out.push_back({k, mean, std::sqrt(var), static_cast<int>(accs.size())});
    }
    return out;
}

void sweep_report(const ResultTable& table, const fs::path& out_dir) {
    if (table.rows.empty()) throw std::invalid_argument("sweep_report: empty result table");
    fs::create_directories(out_dir);

    std::ofstream runs(out_dir / "runs.csv");
    if (!runs) throw std::runtime_error("cannot write " + (out_dir / "runs.csv").string());
    runs << "K,repeat,accuracy\n";
    for (const auto& row : table.rows) {
        runs << row.K << ',' << row.repeat << ',';
        write_accuracy(runs, row.accuracy);
        runs << '\n';
    }
    if (!runs.flush()) throw std::runtime_error("write failed: runs.csv");

    std::ofstream sweep(out_dir / "sweep.csv");
    if (!sweep) throw std::runtime_error("cannot write " + (out_dir / "sweep.csv").string());
    sweep << "K,mean_accuracy,std_accuracy,n_repeats\n";
    for (const auto& agg : table.aggregates()) {
        sweep << agg.K << ',';
        write_accuracy(sweep, agg.mean);
        sweep << ',';
        write_accuracy(sweep, agg.stddev);
        sweep << ',' << agg.n << '\n';
    }
    if (!sweep.flush()) throw std::runtime_error("write failed: sweep.csv");
}

ResultTable load_runs_csv(const fs::path& runs_csv) {
    std::ifstream f(runs_csv);
    if (!f) throw std::runtime_error("cannot open " + runs_csv.string());
    ResultTable table;
    std::string line;
    if (!std::getline(f, line) || line.rfind("K,repeat,accuracy", 0) != 0)
        throw std::runtime_error(runs_csv.string() + ": not a runs.csv file");
    while (std::getline(f, line)) {
        if (trim(line).empty()) continue;
        std::stringstream ss(line);
        std::string k, r, a;
        if (!std::getline(ss, k, ',') || !std::getline(ss, r, ',') || !std::getline(ss, a))
            throw std::runtime_error(runs_csv.string() + ": malformed row: " + line);
        table.rows.push_back({std::stoi(k), std::stoi(r), std::stod(a)});
    }
    return table;
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const Dataset ds = ingest(cfg.dataset_root, cfg.layout);

    FeatureCache cache(cfg.effective_cache_dir(), cfg);
    const FeatureMatrix features = extract_all(ds, cfg, &cache);
    std::fprintf(stderr, "%s: %zu images, %d classes, cache %ld hits / %ld misses\n",
                 cfg.name.c_str(), ds.items.size(), ds.num_classes(), cache.hits, cache.misses);

    fs::create_directories(cfg.out_dir);
    std::ofstream manifest(cfg.out_dir / "splits.csv");
    if (!manifest)
        throw std::runtime_error("cannot write " + (cfg.out_dir / "splits.csv").string());
    manifest << "path,label,repeat,role\n";

    ResultTable table;
    const int max_k = cfg.k_list.back();
    for (int repeat = 0; repeat < cfg.split.repeats; ++repeat) {
        try {
            const Split sp = split(ds, cfg.split, repeat);
            for (int i : sp.train)
                manifest << ds.items[i].path.string() << ',' << ds.items[i].label << ','
                         << repeat << ",train\n";
            for (int i : sp.test)
                manifest << ds.items[i].path.string() << ',' << ds.items[i].label << ','
                         << repeat << ",test\n";

            const Matrix train_x = take_rows(features, sp.train);
            const Matrix test_x = take_rows(features, sp.test);
            std::vector<int> train_y, test_y;
            for (int i : sp.train) train_y.push_back(ds.items[i].label);
            for (int i : sp.test) test_y.push_back(ds.items[i].label);

            // One PCA fit per repeat: eigenvector columns are nested, so the
            // first K columns of the max-K basis are exactly the K-dim model.
            const PcaModel pca = fit_pca(train_x, max_k);
            const Matrix train_p = project(pca, train_x);
            const Matrix test_p = project(pca, test_x);

            for (int K : cfg.k_list) {
                const int k_eff = std::min(K, pca.m);
                Matrix tr(train_p.rows, k_eff), te(test_p.rows, k_eff);
                for (int r = 0; r < train_p.rows; ++r)
                    for (int c = 0; c < k_eff; ++c) tr(r, c) = train_p(r, c);
                for (int r = 0; r < test_p.rows; ++r)
                    for (int c = 0; c < k_eff; ++c) te(r, c) = test_p(r, c);

                const SvmModel model =
                    train_multiclass(tr, train_y, cfg.kernel, cfg.C, cfg.scheme, {}, cfg.jobs);
                int correct = 0;
                for (int r = 0; r < te.rows; ++r)
                    if (predict(model, te.row(r)) == test_y[r]) ++correct;
                table.rows.push_back(
                    {K, repeat, te.rows ? double(correct) / te.rows : 1.0});
            }
        } catch (const std::exception& e) {
            throw std::runtime_error("repeat " + std::to_string(repeat) + ": " + e.what());
        }
    }
    if (!manifest.flush()) throw std::runtime_error("write failed: splits.csv");

    sweep_report(table, cfg.out_dir);
    return table;
}

}  // namespace scatface
