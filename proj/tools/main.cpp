// scatface: scattering-feature face recognition toolkit CLI.

#include <complex>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scatface/dataset.hpp"
#include "scatface/experiment.hpp"
#include "scatface/fft.hpp"
#include "scatface/filterbank.hpp"
#include "scatface/image_io.hpp"
#include "scatface/pca.hpp"
#include "scatface/scattering.hpp"

namespace fs = std::filesystem;
using namespace scatface;

namespace {

Image to_image(int side, const std::vector<double>& grid, bool signed_range) {
    double peak = 0;
    for (double v : grid) peak = std::max(peak, std::abs(v));
    Image img(side, side);
    for (int i = 0; i < side * side; ++i)
        img.pixels[i] = peak == 0 ? (signed_range ? 0.5 : 0.0)
                                  : (signed_range ? 0.5 + 0.5 * grid[i] / peak : grid[i] / peak);
    return img;
}

std::vector<double> fftshift(int side, const std::vector<double>& grid) {
    std::vector<double> out(grid.size());
    for (int y = 0; y < side; ++y)
        for (int x = 0; x < side; ++x)
            out[std::size_t((y + side / 2) % side) * side + (x + side / 2) % side] =
                grid[std::size_t(y) * side + x];
    return out;
}

int cmd_ingest(const fs::path& root, const std::string& layout) {
    const Dataset ds = ingest(root, layout_from_string(layout));
    std::printf("%s: %zu images, %d classes\n", ds.name.c_str(), ds.items.size(),
                ds.num_classes());
    std::vector<int> counts(ds.num_classes(), 0);
    for (const auto& item : ds.items) ++counts[item.label];
    for (int c = 0; c < ds.num_classes(); ++c)
        std::printf("  %-24s %d\n", ds.class_names[c].c_str(), counts[c]);
    return 0;
}

struct Overrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> jobs;

    void apply(ExperimentConfig& cfg) const {
        if (seed) cfg.split.seed = *seed;
        if (out) cfg.out_dir = *out;
        if (jobs) cfg.jobs = *jobs;
    }
};

int cmd_extract(const fs::path& config, const Overrides& ov) {
    ExperimentConfig cfg = load_config(config);
    ov.apply(cfg);
    validate_config(cfg);
    const Dataset ds = ingest(cfg.dataset_root, cfg.layout);
    FeatureCache cache(cfg.effective_cache_dir(), cfg);
    extract_all(ds, cfg, &cache);
    std::printf("extracted %zu images (%ld cached, %ld computed) -> %s\n", ds.items.size(),
                cache.hits, cache.misses, cfg.effective_cache_dir().string().c_str());
    return 0;
}

int cmd_run(const fs::path& config, const Overrides& ov) {
    ExperimentConfig cfg = load_config(config);
    ov.apply(cfg);
    const ResultTable table = run_experiment(cfg);
    std::printf("%-6s %-14s %-14s %s\n", "K", "mean_accuracy", "std_accuracy", "n_repeats");
    for (const auto& agg : table.aggregates())
        std::printf("%-6d %-14.4f %-14.4f %d\n", agg.K, agg.mean, agg.stddev, agg.n);
    std::printf("wrote %s\n", (cfg.out_dir / "sweep.csv").string().c_str());
    return 0;
}

int cmd_sweep_report(const fs::path& runs, const fs::path& out) {
    sweep_report(load_runs_csv(runs), out);
    std::printf("wrote %s\n", (out / "sweep.csv").string().c_str());
    return 0;
}

int cmd_filters_dump(int side, int J, int L, const fs::path& out) {
    const FilterBank bank = build_filterbank(side, J, L);
    fs::create_directories(out);
    Fft2 fft(side);
    char name[64];
    for (int j = 0; j < J; ++j) {
        for (int l = 0; l < L; ++l) {
            const auto& hat = bank.psi_hat(j, l);
            std::snprintf(name, sizeof name, "psi_j%d_l%d_freq.png", j, l);
            save_png_gray8(out / name, to_image(side, fftshift(side, hat), false));

            std::vector<cplx> spatial(hat.begin(), hat.end());
            fft.inverse(spatial);
            std::vector<double> re(spatial.size()), im(spatial.size());
            for (std::size_t i = 0; i < spatial.size(); ++i) {
                re[i] = spatial[i].real();
                im[i] = spatial[i].imag();
            }
            std::snprintf(name, sizeof name, "psi_j%d_l%d_real.png", j, l);
            save_png_gray8(out / name, to_image(side, fftshift(side, re), true));
            std::snprintf(name, sizeof name, "psi_j%d_l%d_imag.png", j, l);
            save_png_gray8(out / name, to_image(side, fftshift(side, im), true));
        }
    }
    save_png_gray8(out / "phi_freq.png", to_image(side, fftshift(side, bank.phi), false));
    std::vector<cplx> spatial(bank.phi.begin(), bank.phi.end());
    fft.inverse(spatial);
    std::vector<double> re(spatial.size());
    for (std::size_t i = 0; i < spatial.size(); ++i) re[i] = spatial[i].real();
    save_png_gray8(out / "phi_spatial.png", to_image(side, fftshift(side, re), true));

    std::printf("wrote %d filter images to %s\n", 3 * J * L + 2, out.string().c_str());
    std::printf("frame bounds: [%.6f, %.6f]\n", bank.frame_lower, bank.frame_upper);
    return 0;
}

int cmd_scatter_dump(const fs::path& image, int side, int J, int L, int max_order,
                     const std::string& scale_order, const fs::path& out) {
    const Image img = preprocess(load_image(image), side);
    const FilterBank bank = build_filterbank(side, J, L);
    const ScatteringMaps maps =
        scatter(img, bank, max_order, scale_order_from_string(scale_order));
    fs::create_directories(out);
    for (std::size_t i = 0; i < maps.size(); ++i)
        save_png_gray8(out / (maps.paths[i].label() + ".png"),
                       to_image(side, maps.maps[i], false));
    std::printf("wrote %zu scattering maps to %s\n", maps.size(), out.string().c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scattering-feature face recognition toolkit"};
    app.require_subcommand(1);

    std::string root, layout = "one-dir-per-class";
    auto* ingest_cmd = app.add_subcommand("ingest", "Validate a dataset directory");
    ingest_cmd->add_option("--root", root, "Dataset root directory")->required();
    ingest_cmd->add_option("--layout", layout, "one-dir-per-class | filename-prefix");

    std::string config;
    Overrides ov;
    std::uint64_t seed_val = 0;
    std::string out_val;
    int jobs_val = 0;
    auto add_overrides = [&](CLI::App* cmd, bool with_seed) {
        if (with_seed)
            cmd->add_option("--seed", seed_val, "Override the config seed")
                ->each([&](const std::string&) { ov.seed = seed_val; });
        cmd->add_option("--out", out_val, "Override the output directory")
            ->each([&](const std::string&) { ov.out = out_val; });
        cmd->add_option("--jobs", jobs_val, "Worker threads")
            ->each([&](const std::string&) { ov.jobs = jobs_val; });
    };

    auto* extract_cmd = app.add_subcommand("extract", "Populate the feature cache");
    extract_cmd->add_option("--config", config, "Experiment config file")->required();
    add_overrides(extract_cmd, false);

    auto* run_cmd = app.add_subcommand("run", "Run the full benchmark");
    run_cmd->add_option("--config", config, "Experiment config file")->required();
    add_overrides(run_cmd, true);

    std::string runs_csv, report_out = ".";
    auto* report_cmd = app.add_subcommand("sweep-report", "Aggregate a runs.csv");
    report_cmd->add_option("--runs", runs_csv, "Per-repeat runs.csv")->required();
    report_cmd->add_option("--out", report_out, "Output directory");

    int side = 64, J = 5, L = 6, max_order = 2;
    std::string dump_out = "dump", scale_order = "decreasing", image_path;
    auto* filters_cmd = app.add_subcommand("filters", "Filter bank inspection");
    auto* filters_dump = filters_cmd->add_subcommand("dump", "Write filter PNGs");
    filters_dump->add_option("--side", side, "Grid side (power of two)");
    filters_dump->add_option("--scales", J, "Scale count J");
    filters_dump->add_option("--orientations", L, "Orientation count L");
    filters_dump->add_option("--out", dump_out, "Output directory");

    auto* scatter_cmd = app.add_subcommand("scatter", "Scattering transform inspection");
    auto* scatter_dump = scatter_cmd->add_subcommand("dump", "Write per-path map PNGs");
    scatter_dump->add_option("--image", image_path, "Input image")->required();
    scatter_dump->add_option("--side", side, "Preprocess side (power of two)");
    scatter_dump->add_option("--scales", J, "Scale count J");
    scatter_dump->add_option("--orientations", L, "Orientation count L");
    scatter_dump->add_option("--max-order", max_order, "Scattering order (0-2)");
    scatter_dump->add_option("--scale-order", scale_order, "decreasing | increasing");
    scatter_dump->add_option("--out", dump_out, "Output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(ingest_cmd)) return cmd_ingest(root, layout);
        if (app.got_subcommand(extract_cmd)) return cmd_extract(config, ov);
        if (app.got_subcommand(run_cmd)) return cmd_run(config, ov);
        if (app.got_subcommand(report_cmd)) return cmd_sweep_report(runs_csv, report_out);
        if (app.got_subcommand(filters_cmd)) {
            if (!filters_dump->parsed()) throw CLI::CallForHelp();
            return cmd_filters_dump(side, J, L, dump_out);
        }
        if (app.got_subcommand(scatter_cmd)) {
            if (!scatter_dump->parsed()) throw CLI::CallForHelp();
            return cmd_scatter_dump(image_path, side, J, L, max_order, scale_order, dump_out);
        }
    } catch (const CLI::CallForHelp&) {
        std::puts(app.help().c_str());
        return 0;
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", e.what()}};
        std::fprintf(stderr, "%s\n", err.dump().c_str());
        return 1;
    }
    return 0;
}
