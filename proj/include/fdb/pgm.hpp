#pragma once

#include <cctype>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include "fdb/image.hpp"

namespace fdb {

/// File-system level failure (unreadable input, unwritable output).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string next_pnm_token(std::istream& in) {
    std::string tok;
    int c;
    while ((c = in.get()) != EOF) {
        if (c == '#') {
            while ((c = in.get()) != EOF && c != '\n') {}
            continue;
        }
        if (std::isspace(c)) continue;
        tok.push_back(static_cast<char>(c));
        while ((c = in.peek()) != EOF && !std::isspace(c) && c != '#')
            tok.push_back(static_cast<char>(in.get()));
        return tok;
    }
    return tok;
}

inline int parse_pnm_number(std::istream& in, const std::string& what) {
    const std::string tok = next_pnm_token(in);
    try {
        std::size_t pos = 0;
        const int v = std::stoi(tok, &pos);
        if (pos != tok.size() || v < 0) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw IoError("pgm: bad " + what + " field: '" + tok + "'");
    }
}

} // namespace detail

/// Reads an 8-bit portable graymap (P2 or P5) into intensities in [0,255].
inline RealImage read_pgm(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open image: " + path.string());
    const std::string magic = detail::next_pnm_token(in);
    if (magic != "P5" && magic != "P2")
        throw IoError("pgm: unsupported format '" + magic + "' in " + path.string());
    const int width = detail::parse_pnm_number(in, "width");
    const int height = detail::parse_pnm_number(in, "height");
    const int maxval = detail::parse_pnm_number(in, "maxval");
    if (width < 1 || height < 1) throw IoError("pgm: bad dimensions in " + path.string());
    if (maxval < 1 || maxval > 255)
        throw IoError("pgm: only 8-bit graymaps are supported: " + path.string());

    RealImage img(width, height);
    if (magic == "P5") {
        in.get(); // single whitespace after maxval
        std::vector<unsigned char> row(static_cast<std::size_t>(width));
        for (int y = 0; y < height; ++y) {
            in.read(reinterpret_cast<char*>(row.data()), width);
            if (!in) throw IoError("pgm: truncated pixel data in " + path.string());
            for (int x = 0; x < width; ++x) img.at(x, y) = row[x];
        }
    } else {
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                img.at(x, y) = detail::parse_pnm_number(in, "pixel");
    }
    return img;
}

/// Writes a binary (P5) graymap; values are rounded and clamped to [0,255].
inline void write_pgm(const RealImage& img, const std::filesystem::path& path) {
    if (img.empty()) throw std::invalid_argument("write_pgm: empty image");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(img.width));
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double v = std::round(img.at(x, y));
            row[x] = static_cast<unsigned char>(std::clamp(v, 0.0, 255.0));
        }
        out.write(reinterpret_cast<const char*>(row.data()), img.width);
    }
    if (!out) throw IoError("write failed: " + path.string());
}

/// Writes with the value range mapped linearly onto [0,255] (flat images
/// come out black).
inline void write_pgm_normalized(const RealImage& img, const std::filesystem::path& path) {
    if (img.empty()) throw std::invalid_argument("write_pgm_normalized: empty image");
    double lo = img.data[0], hi = img.data[0];
    for (double v : img.data) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    RealImage scaled(img.width, img.height);
    if (hi > lo)
        for (std::size_t i = 0; i < img.size(); ++i)
            scaled.data[i] = 255.0 * (img.data[i] - lo) / (hi - lo);
    write_pgm(scaled, path);
}

/// Reads a mask image: pixel > 127 means foreground.
inline BinaryMask read_mask(const std::filesystem::path& path) {
    const RealImage img = read_pgm(path);
    BinaryMask mask(img.width, img.height);
    for (std::size_t i = 0; i < img.size(); ++i) mask.data[i] = img.data[i] > 127.0 ? 1 : 0;
    return mask;
}

/// Writes a mask with foreground = white (255).
inline void write_mask(const BinaryMask& mask, const std::filesystem::path& path) {
    if (mask.empty()) throw std::invalid_argument("write_mask: empty mask");
    RealImage img(mask.width, mask.height);
    for (std::size_t i = 0; i < mask.size(); ++i) img.data[i] = mask.data[i] ? 255.0 : 0.0;
    write_pgm(img, path);
}

} // namespace fdb
