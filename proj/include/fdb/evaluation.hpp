#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "fdb/parallel.hpp"
#include "fdb/pgm.hpp"
#include "fdb/segmentation.hpp"

namespace fdb {

/// Per-image score against ground truth.
struct EvalResult {
    std::string image_id;
    double err = 0.0;                    // fraction of misclassified pixels
    long long missed_foreground = 0;     // truth 1, estimated 0
    long long missed_background = 0;     // truth 0, estimated 1
    int width = 0;
    int height = 0;
};

/// Aggregated scores over one database directory.
struct DatabaseReport {
    std::string database_id;
    std::vector<EvalResult> per_image;   // sorted by image_id
    double mean_err = 0.0;               // fraction; meaningless when empty
    bool empty = true;
    int warnings = 0;                    // images skipped (missing mask, bad file)
    std::vector<std::string> warning_messages;
    FdbParams params;
};

/// Err = (M_f + M_b) / (N1 * N2).
inline EvalResult error_rate(const BinaryMask& estimated, const BinaryMask& truth) {
    if (estimated.width != truth.width || estimated.height != truth.height)
        throw std::invalid_argument("error_rate: mask dimensions differ");
    EvalResult r;
    r.width = truth.width;
    r.height = truth.height;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth.data[i] && !estimated.data[i]) ++r.missed_foreground;
        else if (!truth.data[i] && estimated.data[i]) ++r.missed_background;
    }
    r.err = static_cast<double>(r.missed_foreground + r.missed_background) /
            (static_cast<double>(truth.width) * truth.height);
    return r;
}

/// Maps an image file to its ground-truth mask: <stem><suffix>.<extension>
/// inside the truth directory.
struct MaskNaming {
    std::string suffix = "_seg";
    std::string extension = "pgm";

    std::filesystem::path mask_path(const std::filesystem::path& image,
                                    const std::filesystem::path& truth_dir) const {
        return truth_dir / (image.stem().string() + suffix + "." + extension);
    }
};

namespace detail {

inline bool is_graymap_file(const std::filesystem::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".pgm" || ext == ".pnm";
}

inline std::vector<std::filesystem::path> list_graymaps(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw IoError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && is_graymap_file(entry.path()))
            files.push_back(entry.path());
    std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
        const std::string sa = a.stem().string(), sb = b.stem().string();
        return sa != sb ? sa < sb : a.filename().string() < b.filename().string();
    });
    return files;
}

inline std::string format_percent(double fraction) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", fraction * 100.0);
    return buf;
}

} // namespace detail

/// Segments every graymap in `image_dir`, scores each against its mask in
/// `truth_dir`, and aggregates. Images with a missing or unreadable mask
/// are counted as warnings and excluded from the mean. Deterministic for
/// any worker count: results and the mean follow image_id order.
inline DatabaseReport evaluate_database(const std::filesystem::path& image_dir,
                                        const std::filesystem::path& truth_dir,
                                        const FdbParams& params, const MaskNaming& naming = {},
                                        int workers = 1,
                                        Synthesis synthesis = Synthesis::factorized,
                                        ShrinkKind kind = ShrinkKind::soft,
                                        BankCache* cache = nullptr, double resize = 1.0) {
    params.validate();
    if (!(resize > 0.0)) throw std::invalid_argument("evaluate_database: resize must be positive");
    const std::vector<std::filesystem::path> files = detail::list_graymaps(image_dir);

    DatabaseReport report;
    report.database_id = image_dir.filename().string();
    report.params = params;
    if (files.empty()) return report;

    struct Slot {
        bool ok = false;
        EvalResult result;
        std::string warning;
    };
    std::vector<Slot> slots(files.size());
    BankCache local_cache;
    BankCache& banks = cache ? *cache : local_cache;

    parallel_for(files.size(), workers, [&](std::size_t i) {
        Slot& slot = slots[i];
        const std::filesystem::path& image_path = files[i];
        const std::filesystem::path mask_path = naming.mask_path(image_path, truth_dir);
        try {
            const RealImage original = read_pgm(image_path);
            const BinaryMask truth = read_mask(mask_path);
            RealImage working = resize == 1.0 ? original : resize_bilinear(original, resize);
            const auto bank = banks.get(working.width + 2 * params.pad_margin,
                                        working.height + 2 * params.pad_margin, params);
            BinaryMask mask = segment(working, params, *bank, synthesis, kind);
            mask = restore_mask_size(mask, original.width, original.height);
            slot.result = error_rate(mask, truth);
            slot.result.image_id = image_path.stem().string();
            slot.ok = true;
        } catch (const std::exception& e) {
            slot.warning = image_path.filename().string() + ": " + e.what();
        }
    });

    double sum = 0.0;
    for (const Slot& slot : slots) {
        if (slot.ok) {
            report.per_image.push_back(slot.result);
            sum += slot.result.err;
        } else {
            ++report.warnings;
            report.warning_messages.push_back(slot.warning);
        }
    }
    if (!report.per_image.empty()) {
        report.mean_err = sum / static_cast<double>(report.per_image.size());
        report.empty = false;
    }
    return report;
}

/// CSV report: header, one row per image (err in percent), and a trailing
/// aggregate row; the aggregate err is "NA" for an empty report.
inline void write_report(const DatabaseReport& report, const std::filesystem::path& out) {
    std::ofstream file(out);
    if (!file) throw IoError("cannot open for writing: " + out.string());
    file << "image_id,err,Mf,Mb\n";
    long long total_mf = 0, total_mb = 0;
    for (const EvalResult& r : report.per_image) {
        file << r.image_id << "," << detail::format_percent(r.err) << ","
             << r.missed_foreground << "," << r.missed_background << "\n";
        total_mf += r.missed_foreground;
        total_mb += r.missed_background;
    }
    file << "mean,";
    if (report.empty) file << "NA";
    else file << detail::format_percent(report.mean_err);
    file << "," << total_mf << "," << total_mb << "\n";
    if (!file) throw IoError("write failed: " + out.string());
}

} // namespace fdb
