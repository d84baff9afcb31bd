#pragma once

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>

#include "fdb/filterbank.hpp"

namespace fdb {

/// Two-scale block-vote morphology: 9 blocks of side `block_size`, a block
/// passes when its white count reaches block_size^2 / count_divisor, and a
/// pixel needs `votes_required` passing blocks.
struct MorphologySpec {
    int block_size = 9;        // s, odd so blocks are centered
    double count_divisor = 5;  // t
    int votes_required = 6;    // b, out of the 9 blocks

    void validate() const {
        if (block_size < 1 || block_size % 2 == 0)
            throw std::invalid_argument("MorphologySpec: block size must be odd and >= 1");
        if (!(count_divisor > 0.0))
            throw std::invalid_argument("MorphologySpec: count divisor must be > 0");
        if (votes_required < 1 || votes_required > 9)
            throw std::invalid_argument("MorphologySpec: votes required must be in [1,9]");
    }
    double count_threshold() const {
        return static_cast<double>(block_size) * block_size / count_divisor;
    }
};

/// The seven tunables (C, n, L, gamma, s, t, b) plus the passband cutoffs
/// and the mirror-padding margin. Defaults are the fixed values used across
/// all databases with C = 0.06, gamma = 1, t = 5.
struct FdbParams {
    double C = 0.06;          // shrinkage constant, beta = C * max|c|
    int n = 20;               // directional Hilbert order
    int L = 16;               // number of directions
    int gamma = 1;            // Butterworth order
    int s = 9;                // morphology block side
    double t = 5.0;           // morphology count divisor
    int b = 6;                // morphology votes required
    double omega_low = 0.3;   // passband low cutoff (radians/sample)
    double omega_high = 1.0;  // passband high cutoff (radians/sample)
    int pad_margin = 15;      // mirror padding in pixels

    BandpassSpec band_spec() const { return BandpassSpec{omega_low, omega_high, gamma}; }
    DirectionalSpec dir_spec() const { return DirectionalSpec{L, n}; }
    MorphologySpec morph_spec() const { return MorphologySpec{s, t, b}; }

    void validate() const {
        if (!(C >= 0.0)) throw std::invalid_argument("FdbParams: C must be >= 0");
        if (pad_margin < 0) throw std::invalid_argument("FdbParams: pad_margin must be >= 0");
        band_spec().validate();
        dir_spec().validate();
        morph_spec().validate();
    }
};

/// Resolved run configuration: parameters plus the mask naming rule and the
/// optional pre-padding rescale factor.
struct ConfigValues {
    FdbParams params;
    std::string mask_suffix = "_seg";
    std::string mask_ext = "pgm";
    double resize = 1.0;
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + value);
    }
}

inline int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw std::invalid_argument("config: bad integer value for '" + key + "': " + value);
    }
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

} // namespace detail

/// Applies one "key=value" pair; keys are the FdbParams field names plus
/// mask_suffix, mask_ext and resize. Unknown keys are an error.
inline void apply_config_entry(ConfigValues& cfg, const std::string& key, const std::string& value) {
    if (key == "C") cfg.params.C = detail::parse_double(key, value);
    else if (key == "n") cfg.params.n = detail::parse_int(key, value);
    else if (key == "L") cfg.params.L = detail::parse_int(key, value);
    else if (key == "gamma") cfg.params.gamma = detail::parse_int(key, value);
    else if (key == "s") cfg.params.s = detail::parse_int(key, value);
    else if (key == "t") cfg.params.t = detail::parse_double(key, value);
    else if (key == "b") cfg.params.b = detail::parse_int(key, value);
    else if (key == "omega_low") cfg.params.omega_low = detail::parse_double(key, value);
    else if (key == "omega_high") cfg.params.omega_high = detail::parse_double(key, value);
    else if (key == "pad_margin") cfg.params.pad_margin = detail::parse_int(key, value);
    else if (key == "mask_suffix") cfg.mask_suffix = value;
    else if (key == "mask_ext") cfg.mask_ext = value;
    else if (key == "resize") cfg.resize = detail::parse_double(key, value);
    else throw std::invalid_argument("config: unknown key '" + key + "'");
}

/// Parses "key = value" overrides in the inline k=v form.
inline void apply_config_override(ConfigValues& cfg, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("config: override must look like key=value, got '" + kv + "'");
    apply_config_entry(cfg, detail::trim(kv.substr(0, eq)), detail::trim(kv.substr(eq + 1)));
}

/// Flat key-value config text: one "key = value" per line, '#' comments.
inline ConfigValues parse_config_text(const std::string& text, ConfigValues base = {}) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) + " has no '='");
        apply_config_entry(base, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
    }
    return base;
}

inline std::string config_to_text(const ConfigValues& cfg) {
    std::ostringstream out;
    out << "C = " << detail::format_double(cfg.params.C) << "\n"
        << "n = " << cfg.params.n << "\n"
        << "L = " << cfg.params.L << "\n"
        << "gamma = " << cfg.params.gamma << "\n"
        << "s = " << cfg.params.s << "\n"
        << "t = " << detail::format_double(cfg.params.t) << "\n"
        << "b = " << cfg.params.b << "\n"
        << "omega_low = " << detail::format_double(cfg.params.omega_low) << "\n"
        << "omega_high = " << detail::format_double(cfg.params.omega_high) << "\n"
        << "pad_margin = " << cfg.params.pad_margin << "\n"
        << "mask_suffix = " << cfg.mask_suffix << "\n"
        << "mask_ext = " << cfg.mask_ext << "\n"
        << "resize = " << detail::format_double(cfg.resize) << "\n";
    return out.str();
}

} // namespace fdb
