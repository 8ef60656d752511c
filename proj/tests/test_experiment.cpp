#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "scatface/experiment.hpp"
#include "scatface/pca.hpp"
#include "scatface/rng.hpp"

using namespace scatface;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small_config(const fs::path& root, const fs::path& out) {
    ExperimentConfig cfg;
    cfg.name = "synthetic";
    cfg.dataset_root = root;
    cfg.layout = Layout::one_dir_per_class;
    cfg.side = 16;
    cfg.J = 2;
    cfg.L = 2;
    cfg.split.count = 3;
    cfg.split.seed = 77;
    cfg.split.repeats = 2;
    cfg.k_list = {2, 4};
    cfg.C = 1.0;
    cfg.scheme = MulticlassScheme::one_vs_one;
    cfg.out_dir = out;
    return cfg;
}

}  // namespace

TEST_CASE("config files parse into typed fields") {
    fixtures::TempDir dir("cfg");
    const fs::path path = dir.path() / "exp.conf";
    std::ofstream(path) << "# benchmark config\n"
                           "name = demo\n"
                           "dataset_root = /data/faces\n"
                           "layout = filename-prefix\n"
                           "\n"
                           "side = 32\n"
                           "J = 3\n"
                           "L = 4\n"
                           "max_order = 2\n"
                           "scale_order = increasing\n"
                           "train_count = 6\n"
                           "seed = 123\n"
                           "repeats = 5\n"
                           "k_list = 10, 25, 50\n"
                           "kernel = rbf:0.5\n"
                           "C = 2.5\n"
                           "scheme = one-vs-rest\n"
                           "out_dir = results\n"
                           "jobs = 2\n";
    const ExperimentConfig cfg = load_config(path);
    CHECK(cfg.name == "demo");
    CHECK(cfg.dataset_root == "/data/faces");
    CHECK(cfg.layout == Layout::filename_prefix);
    CHECK(cfg.side == 32);
    CHECK(cfg.J == 3);
    CHECK(cfg.L == 4);
    CHECK(cfg.scale_order == ScaleOrder::increasing);
    CHECK(cfg.split.count == 6);
    CHECK(cfg.split.seed == 123);
    CHECK(cfg.split.repeats == 5);
    CHECK(cfg.k_list == std::vector<int>{10, 25, 50});
    CHECK(cfg.kernel.kind == Kernel::Kind::rbf);
    CHECK(cfg.kernel.gamma == doctest::Approx(0.5));
    CHECK(cfg.C == doctest::Approx(2.5));
    CHECK(cfg.scheme == MulticlassScheme::one_vs_rest);
    CHECK(cfg.out_dir == "results");
    CHECK(cfg.jobs == 2);
    CHECK(cfg.effective_cache_dir() == fs::path("results") / "cache");
}

TEST_CASE("config errors carry the offending line") {
    fixtures::TempDir dir("cfgbad");
    const fs::path path = dir.path() / "exp.conf";

    SUBCASE("unknown key") {
        std::ofstream(path) << "side = 32\nwibble = 9\n";
        CHECK_THROWS_WITH_AS(load_config(path), doctest::Contains("wibble"),
                             std::runtime_error);
    }
    SUBCASE("malformed number") {
        std::ofstream(path) << "J = banana\n";
        CHECK_THROWS_AS(load_config(path), std::runtime_error);
    }
    SUBCASE("missing separator") {
        std::ofstream(path) << "just some words\n";
        CHECK_THROWS_AS(load_config(path), std::runtime_error);
    }
    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_config(dir.path() / "absent.conf"), std::runtime_error);
    }
}

TEST_CASE("validate_config enforces component preconditions") {
    ExperimentConfig cfg;
    cfg.dataset_root = "/tmp";
    cfg.split.count = 5;
    validate_config(cfg);  // now satisfiable

    SUBCASE("side must be a power of two") {
        cfg.side = 48;
        CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    }
    SUBCASE("2^J must fit the image") {
        cfg.side = 16;
        cfg.J = 5;
        CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    }
    SUBCASE("k_list must be ascending and positive") {
        cfg.k_list = {10, 10};
        CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
        cfg.k_list = {};
        CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
        cfg.k_list = {0, 5};
        CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    }
    SUBCASE("only the recorded variance convention is accepted") {
        cfg.variance = "sample";
        CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    }
    SUBCASE("split must pick a rule") {
        cfg.split.count = 0;
        cfg.split.fraction = 0;
        CHECK_THROWS_AS(validate_config(cfg), std::invalid_argument);
    }
}

TEST_CASE("parameter hash tracks feature-shaping knobs only") {
    ExperimentConfig a;
    ExperimentConfig b;
    CHECK(scattering_params_hash(a) == scattering_params_hash(b));

    b.C = 99.0;
    b.kernel = Kernel::rbf(2.0);
    b.split.seed = 5;
    CHECK(scattering_params_hash(a) == scattering_params_hash(b));

    b = a;
    b.J = 4;
    CHECK(scattering_params_hash(a) != scattering_params_hash(b));
    b = a;
    b.side = 32;
    CHECK(scattering_params_hash(a) != scattering_params_hash(b));
    b = a;
    b.scale_order = ScaleOrder::increasing;
    CHECK(scattering_params_hash(a) != scattering_params_hash(b));
}

TEST_CASE("feature cache: hits, corruption recovery, key sensitivity") {
    fixtures::TempDir dir("cache");
    fixtures::make_prototype_dataset(dir.path() / "data", 3, 4, 16, 0.01, 101);
    const Dataset ds = ingest(dir.path() / "data", Layout::one_dir_per_class);

    ExperimentConfig cfg = small_config(dir.path() / "data", dir.path() / "out");
    const fs::path cache_dir = cfg.effective_cache_dir();

    FeatureCache c1(cache_dir, cfg);
    const FeatureMatrix f1 = extract_all(ds, cfg, &c1);
    CHECK(c1.misses == 12);
    CHECK(c1.hits == 0);
    CHECK(f1.count() == 12);
    CHECK(f1.dim == unsigned(feature_length(2, 2)));

    FeatureCache c2(cache_dir, cfg);
    const FeatureMatrix f2 = extract_all(ds, cfg, &c2);
    CHECK(c2.hits == 12);
    CHECK(c2.misses == 0);
    CHECK(f2.values == f1.values);
    CHECK(f2.labels == f1.labels);

    SUBCASE("a corrupted entry is recomputed") {
        fs::path victim;
        for (const auto& e : fs::directory_iterator(cache_dir))
            if (e.path().extension() == ".sfv") {
                victim = e.path();
                break;
            }
        REQUIRE(!victim.empty());
        {
            std::fstream f(victim, std::ios::in | std::ios::out | std::ios::binary);
            f.seekp(40);
            f.put('\x5a');
        }
        FeatureCache c3(cache_dir, cfg);
        const FeatureMatrix f3 = extract_all(ds, cfg, &c3);
        CHECK(c3.hits == 11);
        CHECK(c3.misses == 1);
        CHECK(f3.values == f1.values);

        FeatureCache c4(cache_dir, cfg);
        extract_all(ds, cfg, &c4);
        CHECK(c4.hits == 12);  // rewritten entry is valid again
    }

    SUBCASE("changing J changes every key") {
        ExperimentConfig deeper = cfg;
        deeper.J = 3;
        FeatureCache c3(cache_dir, deeper);
        const FeatureMatrix f3 = extract_all(ds, deeper, &c3);
        CHECK(c3.hits == 0);
        CHECK(c3.misses == 12);
        CHECK(f3.dim == unsigned(feature_length(3, 2)));
    }
}

TEST_CASE("end-to-end synthetic run: perfect accuracy, deterministic artifacts") {
    fixtures::TempDir dir("runexp");
    fixtures::make_prototype_dataset(dir.path() / "data", 3, 6, 16, 0.01, 7);

    ExperimentConfig cfg = small_config(dir.path() / "data", dir.path() / "out1");
    cfg.cache_dir = dir.path() / "cache";
    const ResultTable t1 = run_experiment(cfg);

    REQUIRE(t1.rows.size() == 4);  // 2 K values × 2 repeats
    for (const auto& r : t1.rows) {
        CHECK(r.accuracy >= 0.0);
        CHECK(r.accuracy <= 1.0);
        if (r.K == 4) CHECK(r.accuracy == 1.0);
    }

    CHECK(fs::exists(cfg.out_dir / "sweep.csv"));
    CHECK(fs::exists(cfg.out_dir / "runs.csv"));
    CHECK(fs::exists(cfg.out_dir / "splits.csv"));

    const std::string sweep1 = slurp(cfg.out_dir / "sweep.csv");
    CHECK(sweep1.rfind("K,mean_accuracy,std_accuracy,n_repeats\n", 0) == 0);

    ExperimentConfig cfg2 = cfg;
    cfg2.out_dir = dir.path() / "out2";
    run_experiment(cfg2);
    CHECK(slurp(cfg2.out_dir / "sweep.csv") == sweep1);
    CHECK(slurp(cfg2.out_dir / "runs.csv") == slurp(cfg.out_dir / "runs.csv"));

    // splits manifest names every item exactly once per repeat
    std::ifstream splits(cfg.out_dir / "splits.csv");
    std::string line;
    std::getline(splits, line);
    CHECK(line == "path,label,repeat,role");
    int rows = 0, train_rows = 0;
    while (std::getline(splits, line)) {
        ++rows;
        if (line.find(",train") != std::string::npos) ++train_rows;
    }
    CHECK(rows == 18 * 2);
    CHECK(train_rows == 9 * 2);

    // runs.csv round-trips through the loader
    const ResultTable back = load_runs_csv(cfg.out_dir / "runs.csv");
    REQUIRE(back.rows.size() == t1.rows.size());
    for (std::size_t i = 0; i < back.rows.size(); ++i) {
        CHECK(back.rows[i].K == t1.rows[i].K);
        CHECK(back.rows[i].repeat == t1.rows[i].repeat);
        CHECK(back.rows[i].accuracy == t1.rows[i].accuracy);
    }
}

TEST_CASE("K beyond the feature rank clamps") {
    fixtures::TempDir dir("kclamp");
    fixtures::make_prototype_dataset(dir.path() / "data", 3, 6, 16, 0.01, 9);

    ExperimentConfig cfg = small_config(dir.path() / "data", dir.path() / "out");
    cfg.split.repeats = 1;
    cfg.k_list = {8, 50};  // 9 train rows → rank ≤ 8
    const ResultTable t = run_experiment(cfg);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0].accuracy == t.rows[1].accuracy);
}

TEST_CASE("a test-set outlier cannot alter the trained model") {
    KeyedRng rng(303, 0, 0);
    Matrix all(10, 6);
    for (double& v : all.a) v = rng.next_gaussian();
    const std::vector<int> train_idx = {0, 2, 3, 5, 6, 8};

    auto fit_on_train = [&](const Matrix& data) {
        Matrix tr(int(train_idx.size()), data.cols);
        for (std::size_t i = 0; i < train_idx.size(); ++i)
            for (int j = 0; j < data.cols; ++j) tr(int(i), j) = data(train_idx[i], j);
        return fit_pca(tr, 4);
    };

    fixtures::TempDir dir("leak");
    const PcaModel before = fit_on_train(all);
    save_pca_json(before, dir.path() / "before.json");

    Matrix poisoned = all;
    for (int j = 0; j < 6; ++j) poisoned(9, j) = 1e9;  // row 9 is test-only
    const PcaModel after = fit_on_train(poisoned);
    save_pca_json(after, dir.path() / "after.json");

    CHECK(slurp(dir.path() / "before.json") == slurp(dir.path() / "after.json"));
}

TEST_CASE("harness accuracy shifts by at most one test image when one is swapped") {
    fixtures::TempDir dir("leak2");
    const fs::path root = dir.path() / "data";
    fixtures::make_prototype_dataset(root, 3, 6, 16, 0.01, 11);

    ExperimentConfig cfg = small_config(root, dir.path() / "outA");
    cfg.split.repeats = 1;
    cfg.k_list = {4};
    const ResultTable a = run_experiment(cfg);

    // find an item that repeat 0 places in the test set, and white it out
    const Dataset ds = ingest(root, Layout::one_dir_per_class);
    const Split s = split(ds, cfg.split, 0);
    Image white(16, 16);
    for (double& p : white.pixels) p = 1.0;
    fixtures::write_pgm8(ds.items[std::size_t(s.test.front())].path, white);

    ExperimentConfig cfg2 = cfg;
    cfg2.out_dir = dir.path() / "outB";
    const ResultTable b = run_experiment(cfg2);

    REQUIRE(a.rows.size() == 1);
    REQUIRE(b.rows.size() == 1);
    CHECK(std::abs(a.rows[0].accuracy - b.rows[0].accuracy) <= 1.0 / 9 + 1e-12);
}

TEST_CASE("sweep_report aggregates and formats") {
    ResultTable table;
    table.rows = {{10, 0, 0.9}};

    SUBCASE("single row: std is zero") {
        const auto agg = table.aggregates();
        REQUIRE(agg.size() == 1);
        CHECK(agg[0].K == 10);
        CHECK(agg[0].mean == doctest::Approx(0.9));
        CHECK(agg[0].stddev == 0.0);
        CHECK(agg[0].n == 1);
    }

    SUBCASE("constant repeats: std is zero") {
        table.rows = {{10, 0, 0.9}, {10, 1, 0.9}, {10, 2, 0.9}, {10, 3, 0.9}, {10, 4, 0.9}};
        const auto agg = table.aggregates();
        REQUIRE(agg.size() == 1);
        CHECK(agg[0].mean == doctest::Approx(0.9));
        CHECK(agg[0].stddev == doctest::Approx(0.0).scale(1));
        CHECK(agg[0].n == 5);
    }

    SUBCASE("mixed repeats: population statistics, verified independently") {
        table.rows = {{4, 0, 0.5}, {4, 1, 0.7}, {4, 2, 0.9}, {8, 0, 1.0}, {8, 1, 0.8}};
        fixtures::TempDir dir("sweep");
        sweep_report(table, dir.path());

        const ResultTable loaded = load_runs_csv(dir.path() / "runs.csv");
        REQUIRE(loaded.rows.size() == table.rows.size());

        // recompute aggregates from the loaded rows, the slow way
        for (const auto& agg : loaded.aggregates()) {
            double sum = 0;
            int n = 0;
            for (const auto& r : loaded.rows)
                if (r.K == agg.K) {
                    sum += r.accuracy;
                    ++n;
                }
            const double mean = sum / n;
            double var = 0;
            for (const auto& r : loaded.rows)
                if (r.K == agg.K) var += (r.accuracy - mean) * (r.accuracy - mean);
            var /= n;
            CHECK(agg.n == n);
            CHECK(agg.mean == doctest::Approx(mean).epsilon(1e-15));
            CHECK(agg.stddev == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
        }

        // and spot-check the emitted aggregate line for K=4
        std::ifstream in(dir.path() / "sweep.csv");
        std::string line;
        std::getline(in, line);
        CHECK(line == "K,mean_accuracy,std_accuracy,n_repeats");
        std::getline(in, line);
        CHECK(line.rfind("4,", 0) == 0);
        CHECK(line.find(",3") == line.size() - 2);
    }
}

TEST_CASE("run_experiment propagates component errors with context") {
    fixtures::TempDir dir("experr");
    ExperimentConfig cfg = small_config(dir.path() / "missing", dir.path() / "out");
    CHECK_THROWS_AS(run_experiment(cfg), std::runtime_error);

    fixtures::make_prototype_dataset(dir.path() / "data", 2, 4, 16, 0.01, 13);
    ExperimentConfig cfg2 = small_config(dir.path() / "data", dir.path() / "out");
    cfg2.split.count = 10;  // more than any class holds
    CHECK_THROWS_WITH_AS(run_experiment(cfg2), doctest::Contains("repeat"),
                         std::runtime_error);
}
