// Command-line frontend for the factorized directional bandpass
// segmentation pipeline: single-image segmentation, database evaluation,
// parameter training and filter diagnostics.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fdb/evaluation.hpp"
#include "fdb/pgm.hpp"
#include "fdb/segmentation.hpp"
#include "fdb/training.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitInvariant = 3;

struct CommonOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string synthesis = "factorized";
    std::string shrinkage = "soft";
    int workers = 1;
    double resize = 0.0; // 0 = take the config value
};

void add_common_options(CLI::App& cmd, CommonOptions& opts) {
    cmd.add_option("--config", opts.config_path, "flat key=value parameter file");
    cmd.add_option("--params", opts.overrides, "inline overrides, e.g. --params C=0.05 gamma=2");
    cmd.add_option("--synthesis", opts.synthesis, "synthesis strategy")
        ->check(CLI::IsMember({"factorized", "max", "sum"}));
    cmd.add_option("--shrinkage", opts.shrinkage, "thresholding operator")
        ->check(CLI::IsMember({"soft", "hard", "semisoft", "nonlinear"}));
    cmd.add_option("--workers", opts.workers, "worker threads for batch commands")
        ->check(CLI::PositiveNumber);
    cmd.add_option("--resize", opts.resize, "uniform rescale factor applied before padding");
}

fdb::ConfigValues resolve_config(const CommonOptions& opts) {
    fdb::ConfigValues cfg;
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path);
        if (!in) throw fdb::IoError("cannot open config: " + opts.config_path);
        std::ostringstream text;
        text << in.rdbuf();
        cfg = fdb::parse_config_text(text.str());
    }
    for (const std::string& kv : opts.overrides) fdb::apply_config_override(cfg, kv);
    if (opts.resize > 0.0) cfg.resize = opts.resize;
    if (!(cfg.resize > 0.0)) throw std::invalid_argument("resize must be positive");
    cfg.params.validate();
    return cfg;
}

fdb::Synthesis parse_synthesis(const std::string& name) {
    if (name == "factorized") return fdb::Synthesis::factorized;
    if (name == "max") return fdb::Synthesis::max_response;
    return fdb::Synthesis::sum;
}

fdb::ShrinkKind parse_shrinkage(const std::string& name) {
    if (name == "soft") return fdb::ShrinkKind::soft;
    if (name == "hard") return fdb::ShrinkKind::hard;
    if (name == "semisoft") return fdb::ShrinkKind::semisoft;
    return fdb::ShrinkKind::nonlinear;
}

int cmd_segment(const std::string& image_path, const std::string& out_path,
                const std::string& feature_path, const CommonOptions& opts) {
    const fdb::ConfigValues cfg = resolve_config(opts);
    const fdb::RealImage original = fdb::read_pgm(image_path);
    fdb::RealImage working =
        cfg.resize == 1.0 ? original : fdb::resize_bilinear(original, cfg.resize);

    const fdb::FilterBank bank = fdb::build_filter_bank(
        working.width + 2 * cfg.params.pad_margin, working.height + 2 * cfg.params.pad_margin,
        cfg.params.band_spec(), cfg.params.dir_spec());
    const fdb::SegmentationResult stages = fdb::segment_stages(
        working, cfg.params, bank, parse_synthesis(opts.synthesis),
        parse_shrinkage(opts.shrinkage));

    const fdb::BinaryMask mask =
        fdb::restore_mask_size(stages.roi, original.width, original.height);
    fdb::write_mask(mask, out_path);
    if (!feature_path.empty()) fdb::write_pgm_normalized(stages.feature, feature_path);
    return kExitOk;
}

int cmd_evaluate(const std::string& image_dir, const std::string& truth_dir,
                 const std::string& out_path, const CommonOptions& opts) {
    const fdb::ConfigValues cfg = resolve_config(opts);
    const fdb::MaskNaming naming{cfg.mask_suffix, cfg.mask_ext};
    const fdb::DatabaseReport report = fdb::evaluate_database(
        image_dir, truth_dir, cfg.params, naming, opts.workers,
        parse_synthesis(opts.synthesis), parse_shrinkage(opts.shrinkage), nullptr, cfg.resize);
    if (!out_path.empty()) fdb::write_report(report, out_path);
    for (const std::string& msg : report.warning_messages)
        std::cerr << "warning: " << msg << "\n";
    if (report.empty) std::cout << "NA" << std::endl;
    else std::cout << fdb::detail::format_percent(report.mean_err) << std::endl;
    return kExitOk;
}

std::vector<double> parse_double_list(const std::vector<double>& values,
                                      const std::vector<double>& fallback) {
    return values.empty() ? fallback : values;
}

int cmd_train(const std::string& image_dir, const std::string& truth_dir,
              const std::string& params_path, const std::string& table_path,
              const std::vector<double>& grid_c, const std::vector<int>& grid_gamma,
              const std::vector<double>& grid_t, const CommonOptions& opts) {
    const fdb::ConfigValues cfg = resolve_config(opts);
    const fdb::MaskNaming naming{cfg.mask_suffix, cfg.mask_ext};

    fdb::ParamGrid grid = fdb::ParamGrid::defaults();
    grid.C_values = parse_double_list(grid_c, grid.C_values);
    if (!grid_gamma.empty()) grid.gamma_values = grid_gamma;
    grid.t_values = parse_double_list(grid_t, grid.t_values);

    const fdb::GridSearchResult result =
        fdb::grid_search(image_dir, truth_dir, grid, cfg.params, naming, opts.workers);
    if (!params_path.empty()) fdb::write_params_config(result.best, params_path);
    if (!table_path.empty()) fdb::write_score_table(result.table, table_path);
    std::cout << "C=" << fdb::detail::format_double(result.best.C)
              << " gamma=" << result.best.gamma
              << " t=" << fdb::detail::format_double(result.best.t)
              << " mean_err=" << fdb::detail::format_percent(result.best_report.mean_err)
              << std::endl;
    return kExitOk;
}

// Magnitude image with the spectrum centered (DC at width/2, height/2),
// scaled so the largest magnitude maps to 255.
fdb::RealImage spectrum_magnitude_image(const fdb::ComplexSpectrum& spec) {
    fdb::RealImage out(spec.width, spec.height);
    double max_mag = 0.0;
    for (const auto& v : spec.data) max_mag = std::max(max_mag, std::abs(v));
    const double scale = max_mag > 0.0 ? 255.0 / max_mag : 0.0;
    for (int ky = 0; ky < spec.height; ++ky) {
        const int oy = (ky + spec.height / 2) % spec.height;
        for (int kx = 0; kx < spec.width; ++kx) {
            const int ox = (kx + spec.width / 2) % spec.width;
            out.at(ox, oy) = scale * std::abs(spec.at(kx, ky));
        }
    }
    return out;
}

int cmd_filters(int width, int height, const std::string& out_dir, const CommonOptions& opts) {
    const fdb::ConfigValues cfg = resolve_config(opts);
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (!std::filesystem::is_directory(out_dir))
        throw fdb::IoError("cannot create output directory: " + out_dir);

    const fdb::BandpassSpec band = cfg.params.band_spec();
    const fdb::DirectionalSpec dirs = cfg.params.dir_spec();
    const std::filesystem::path dir(out_dir);

    fdb::write_pgm(spectrum_magnitude_image(fdb::butterworth_2d_spectrum(width, height, band)),
                   dir / "g.pgm");

    fdb::ComplexSpectrum h0(width, height);
    for (int ky = 0; ky < height; ++ky)
        for (int kx = 0; kx < width; ++kx)
            h0.at(kx, ky) = fdb::directional_response(fdb::bin_omega(kx, width),
                                                      fdb::bin_omega(ky, height), 0, dirs);
    fdb::write_pgm(spectrum_magnitude_image(h0), dir / "h0.pgm");

    const fdb::FilterBank bank = fdb::build_filter_bank(width, height, band, dirs);
    for (int l = 0; l < bank.num_directions(); ++l) {
        char name[32];
        std::snprintf(name, sizeof(name), "phi_%02d.pgm", l);
        fdb::write_pgm(spectrum_magnitude_image(bank.spectra[l]), dir / name);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Factorized directional bandpass fingerprint segmentation"};
    app.require_subcommand(1);

    std::string image_path, image_dir, truth_dir, out_path, feature_path;
    std::string params_out, table_out;
    std::vector<double> grid_c, grid_t;
    std::vector<int> grid_gamma;
    int filt_width = 0, filt_height = 0;
    CommonOptions seg_opts, eval_opts, train_opts, filt_opts;

    CLI::App* seg = app.add_subcommand("segment", "segment one image into an ROI mask");
    seg->add_option("image", image_path, "input graymap")->required();
    seg->add_option("--out", out_path, "output mask path")->required();
    seg->add_option("--dump-feature", feature_path, "also write the normalized feature image");
    add_common_options(*seg, seg_opts);

    CLI::App* eval = app.add_subcommand("evaluate", "score a directory against ground truth");
    eval->add_option("image_dir", image_dir, "directory of input graymaps")->required();
    eval->add_option("truth_dir", truth_dir, "directory of ground-truth masks")->required();
    eval->add_option("--out", out_path, "CSV report path");
    add_common_options(*eval, eval_opts);

    CLI::App* train = app.add_subcommand("train", "grid-search C, gamma and t on a training set");
    train->add_option("image_dir", image_dir, "training images")->required();
    train->add_option("truth_dir", truth_dir, "training ground truth")->required();
    train->add_option("--out-params", params_out, "write the selected parameters (config format)");
    train->add_option("--out-table", table_out, "write the full score table CSV");
    train->add_option("--grid-C", grid_c, "candidate C values");
    train->add_option("--grid-gamma", grid_gamma, "candidate gamma values");
    train->add_option("--grid-t", grid_t, "candidate t values");
    add_common_options(*train, train_opts);

    CLI::App* filt = app.add_subcommand("filters", "dump filter magnitude images");
    filt->add_option("width", filt_width, "grid width in bins")->required();
    filt->add_option("height", filt_height, "grid height in bins")->required();
    filt->add_option("--out", out_path, "output directory")->required();
    add_common_options(*filt, filt_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (seg->parsed()) return cmd_segment(image_path, out_path, feature_path, seg_opts);
        if (eval->parsed()) return cmd_evaluate(image_dir, truth_dir, out_path, eval_opts);
        if (train->parsed())
            return cmd_train(image_dir, truth_dir, params_out, table_out, grid_c, grid_gamma,
                             grid_t, train_opts);
        if (filt->parsed()) return cmd_filters(filt_width, filt_height, out_path, filt_opts);
    } catch (const fdb::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvariant;
    }
    return kExitUsage;
}
