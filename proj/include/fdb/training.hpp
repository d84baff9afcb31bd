#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <vector>

#include "fdb/evaluation.hpp"

namespace fdb {

/// Candidate values for the three trained parameters; the remaining
/// parameters stay at their base values.
struct ParamGrid {
    std::vector<double> C_values;
    std::vector<int> gamma_values;
    std::vector<double> t_values;

    void validate() const {
        if (C_values.empty() || gamma_values.empty() || t_values.empty())
            throw std::invalid_argument("ParamGrid: candidate lists must be nonempty");
    }

    // smallest axis-aligned box containing every learned value
    static ParamGrid defaults() {
        ParamGrid g;
        for (int i = 1; i <= 10; ++i) g.C_values.push_back(i / 100.0);
        g.gamma_values = {1, 2, 3, 4};
        g.t_values = {4.0, 5.0, 6.0, 7.0};
        return g;
    }
};

struct GridCell {
    double C = 0.0;
    int gamma = 0;
    double t = 0.0;
    double mean_err = 0.0; // fraction
    bool valid = false;    // false when no image could be scored
};

struct GridSearchResult {
    FdbParams best;
    DatabaseReport best_report;
    std::vector<GridCell> table; // every cell, in (C, gamma, t) order
};

/// Exhaustive search over (C, gamma, t); returns the cell with the lowest
/// mean training error, ties resolved toward the lexicographically smallest
/// triple. Candidate lists are evaluated in ascending order so the full
/// score table is reproducible run to run.
inline GridSearchResult grid_search(const std::filesystem::path& train_images,
                                    const std::filesystem::path& train_truth,
                                    const ParamGrid& grid, const FdbParams& base,
                                    const MaskNaming& naming = {}, int workers = 1) {
    grid.validate();
    base.validate();
    if (detail::list_graymaps(train_images).empty())
        throw std::invalid_argument("grid_search: empty training set");

    std::vector<double> c_values = grid.C_values;
    std::vector<int> gamma_values = grid.gamma_values;
    std::vector<double> t_values = grid.t_values;
    std::sort(c_values.begin(), c_values.end());
    std::sort(gamma_values.begin(), gamma_values.end());
    std::sort(t_values.begin(), t_values.end());

    GridSearchResult result;
    result.table.reserve(c_values.size() * gamma_values.size() * t_values.size());
    BankCache banks;
    double best_err = std::numeric_limits<double>::infinity();
    bool have_best = false;

    for (double c : c_values) {
        for (int gamma : gamma_values) {
            for (double t : t_values) {
                FdbParams params = base;
                params.C = c;
                params.gamma = gamma;
                params.t = t;
                params.validate();
                const DatabaseReport report =
                    evaluate_database(train_images, train_truth, params, naming, workers,
                                      Synthesis::factorized, ShrinkKind::soft, &banks);
                GridCell cell{c, gamma, t, report.mean_err, !report.empty};
                if (!cell.valid) cell.mean_err = std::numeric_limits<double>::quiet_NaN();
                result.table.push_back(cell);
                if (cell.valid && cell.mean_err < best_err) {
                    best_err = cell.mean_err;
                    result.best = params;
                    result.best_report = report;
                    have_best = true;
                }
            }
        }
    }
    if (!have_best)
        throw std::invalid_argument("grid_search: no grid cell produced a scored image");
    return result;
}

/// Score table CSV: C,gamma,t,mean_err with the error in percent
/// ("NA" for cells that scored nothing).
inline void write_score_table(const std::vector<GridCell>& table,
                              const std::filesystem::path& out) {
    std::ofstream file(out);
    if (!file) throw IoError("cannot open for writing: " + out.string());
    file << "C,gamma,t,mean_err\n";
    for (const GridCell& cell : table) {
        file << detail::format_double(cell.C) << "," << cell.gamma << ","
             << detail::format_double(cell.t) << ",";
        if (cell.valid) file << detail::format_percent(cell.mean_err);
        else file << "NA";
        file << "\n";
    }
    if (!file) throw IoError("write failed: " + out.string());
}

/// Selected parameters in the flat config file format.
inline void write_params_config(const FdbParams& params, const std::filesystem::path& out) {
    std::ofstream file(out);
    if (!file) throw IoError("cannot open for writing: " + out.string());
    ConfigValues cfg;
    cfg.params = params;
    file << config_to_text(cfg);
    if (!file) throw IoError("write failed: " + out.string());
}

} // namespace fdb
