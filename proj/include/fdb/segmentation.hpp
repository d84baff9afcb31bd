#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "fdb/params.hpp"
#include "fdb/texture.hpp"

namespace fdb {

/// Adaptive binarization at threshold C * max(feature). A feature image
/// whose maximum is not positive yields an empty mask.
inline BinaryMask binarize(const RealImage& feature, double C) {
    if (!(C >= 0.0)) throw std::invalid_argument("binarize: C must be >= 0");
    if (feature.empty()) throw std::invalid_argument("binarize: empty image");
    double mx = feature.data[0];
    for (double v : feature.data) mx = std::max(mx, v);
    BinaryMask mask(feature.width, feature.height);
    if (mx <= 0.0) return mask;
    const double threshold = C * mx;
    for (std::size_t i = 0; i < feature.size(); ++i)
        mask.data[i] = feature.data[i] >= threshold ? 1 : 0;
    return mask;
}

namespace detail {

// Summed-area table; sum(x0,y0,x1,y1) counts white pixels in the inclusive
// rectangle clipped to the mask (out-of-range area reads as 0).
struct MaskIntegral {
    int width, height;
    std::vector<std::int64_t> table; // (width+1) x (height+1)

    explicit MaskIntegral(const BinaryMask& m) : width(m.width), height(m.height) {
        table.assign(static_cast<std::size_t>(width + 1) * (height + 1), 0);
        for (int y = 0; y < height; ++y) {
            std::int64_t row = 0;
            for (int x = 0; x < width; ++x) {
                row += m.at(x, y);
                at(x + 1, y + 1) = at(x + 1, y) + row;
            }
        }
    }
    std::int64_t& at(int x, int y) { return table[static_cast<std::size_t>(y) * (width + 1) + x]; }
    std::int64_t at(int x, int y) const { return table[static_cast<std::size_t>(y) * (width + 1) + x]; }

    std::int64_t sum(int x0, int y0, int x1, int y1) const {
        x0 = std::max(x0, 0);
        y0 = std::max(y0, 0);
        x1 = std::min(x1, width - 1);
        y1 = std::min(y1, height - 1);
        if (x0 > x1 || y0 > y1) return 0;
        return at(x1 + 1, y1 + 1) - at(x0, y1 + 1) - at(x1 + 1, y0) + at(x0, y0);
    }
};

} // namespace detail

/// Two-scale block vote: around each pixel, 9 blocks of side s centered at
/// offsets {-s,0,s}^2 each count their white pixels; the pixel becomes
/// foreground when at least `votes_required` blocks reach s^2/t.
inline BinaryMask block_vote(const BinaryMask& mask, const MorphologySpec& morph) {
    morph.validate();
    if (mask.empty()) throw std::invalid_argument("block_vote: empty mask");
    const detail::MaskIntegral integral(mask);
    const int s = morph.block_size;
    const int half = s / 2;
    const double threshold = morph.count_threshold();
    BinaryMask out(mask.width, mask.height);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            int votes = 0;
            for (int dy = -s; dy <= s; dy += s) {
                for (int dx = -s; dx <= s; dx += s) {
                    const int cx = x + dx;
                    const int cy = y + dy;
                    const auto count =
                        integral.sum(cx - half, cy - half, cx + half, cy + half);
                    if (static_cast<double>(count) >= threshold) ++votes;
                }
            }
            out.at(x, y) = votes >= morph.votes_required ? 1 : 0;
        }
    }
    return out;
}

/// Keeps only the most populous 8-connected white component (first one in
/// scan order on ties); all-black input stays all-black.
inline BinaryMask largest_component(const BinaryMask& mask) {
    if (mask.empty()) throw std::invalid_argument("largest_component: empty mask");
    const int w = mask.width, h = mask.height;
    std::vector<std::int32_t> label(mask.size(), -1);
    std::vector<std::size_t> population;
    std::vector<std::int32_t> stack;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            if (!mask.data[idx] || label[idx] >= 0) continue;
            const std::int32_t id = static_cast<std::int32_t>(population.size());
            std::size_t count = 0;
            label[idx] = id;
            stack.push_back(static_cast<std::int32_t>(idx));
            while (!stack.empty()) {
                const std::int32_t cur = stack.back();
                stack.pop_back();
                ++count;
                const int cy = cur / w, cx = cur % w;
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        const int nx = cx + dx, ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
                        if (mask.data[nidx] && label[nidx] < 0) {
                            label[nidx] = id;
                            stack.push_back(static_cast<std::int32_t>(nidx));
                        }
                    }
                }
            }
            population.push_back(count);
        }
    }

    BinaryMask out(w, h);
    if (population.empty()) return out;
    std::int32_t best = 0;
    for (std::int32_t id = 1; id < static_cast<std::int32_t>(population.size()); ++id)
        if (population[id] > population[best]) best = id;
    for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = label[i] == best ? 1 : 0;
    return out;
}

namespace detail {

struct HullPoint {
    std::int64_t x, y;
};

inline std::int64_t cross(const HullPoint& o, const HullPoint& a, const HullPoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Monotone chain; returns the hull counter-clockwise (in the algebraic
// sense) without collinear vertices. Degenerate inputs give 1 or 2 points.
inline std::vector<HullPoint> convex_hull(std::vector<HullPoint> pts) {
    std::sort(pts.begin(), pts.end(), [](const HullPoint& a, const HullPoint& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const HullPoint& a, const HullPoint& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;
    std::vector<HullPoint> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

inline bool inside_hull(const std::vector<HullPoint>& hull, const HullPoint& p) {
    if (hull.size() == 1) return p.x == hull[0].x && p.y == hull[0].y;
    if (hull.size() == 2) {
        if (cross(hull[0], hull[1], p) != 0) return false;
        const std::int64_t dx = hull[1].x - hull[0].x, dy = hull[1].y - hull[0].y;
        const std::int64_t dot = (p.x - hull[0].x) * dx + (p.y - hull[0].y) * dy;
        return dot >= 0 && dot <= dx * dx + dy * dy;
    }
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const HullPoint& a = hull[i];
        const HullPoint& b = hull[(i + 1) % hull.size()];
        if (cross(a, b, p) < 0) return false;
    }
    return true;
}

} // namespace detail

/// All pixels whose centers lie inside or on the convex hull of the white
/// pixel centers; an all-black mask stays all-black.
inline BinaryMask convex_hull_mask(const BinaryMask& mask) {
    if (mask.empty()) throw std::invalid_argument("convex_hull_mask: empty mask");
    std::vector<detail::HullPoint> pts;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) pts.push_back({x, y});
    BinaryMask out(mask.width, mask.height);
    if (pts.empty()) return out;

    const std::vector<detail::HullPoint> hull = detail::convex_hull(std::move(pts));
    std::int64_t x0 = hull[0].x, x1 = hull[0].x, y0 = hull[0].y, y1 = hull[0].y;
    for (const auto& p : hull) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    for (std::int64_t y = y0; y <= y1; ++y)
        for (std::int64_t x = x0; x <= x1; ++x)
            if (detail::inside_hull(hull, {x, y}))
                out.at(static_cast<int>(x), static_cast<int>(y)) = 1;
    return out;
}

/// Shared, immutable filter banks keyed by padded grid size and every
/// filter-shaping parameter; rebuilds happen only when gamma or the
/// dimensions change during a sweep.
class BankCache {
  public:
    std::shared_ptr<const FilterBank> get(int width, int height, const FdbParams& p) {
        const Key key{width, height, p.gamma, p.n, p.L, p.omega_low, p.omega_high};
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        auto bank = std::make_shared<const FilterBank>(
            build_filter_bank(width, height, p.band_spec(), p.dir_spec()));
        cache_.emplace(key, bank);
        return bank;
    }

  private:
    using Key = std::tuple<int, int, int, int, int, double, double>;
    std::map<Key, std::shared_ptr<const FilterBank>> cache_;
    std::mutex mutex_;
};

/// Feature image plus the ROI derived from it.
struct SegmentationResult {
    RealImage feature;
    BinaryMask roi;
};

/// Full pipeline with a caller-provided bank (built for the padded size):
/// texture extraction, binarization, block vote, largest component, hull.
inline SegmentationResult segment_stages(const RealImage& img, const FdbParams& params,
                                         const FilterBank& bank,
                                         Synthesis synthesis = Synthesis::factorized,
                                         ShrinkKind kind = ShrinkKind::soft) {
    SegmentationResult result;
    result.feature = extract_texture(img, params, bank, synthesis, kind);

    double feature_max = result.feature.data[0];
    for (double v : result.feature.data) feature_max = std::max(feature_max, v);
    double input_scale = 0.0;
    for (double v : img.data) input_scale = std::max(input_scale, std::abs(v));
    // blank inputs leave only transform rounding residue in the feature
    // image; treat that as "no texture" rather than binarizing noise
    if (feature_max <= input_scale * 1e-9) {
        result.roi = BinaryMask(img.width, img.height);
        return result;
    }

    const BinaryMask bin = binarize(result.feature, params.C);
    const BinaryMask voted = block_vote(bin, params.morph_spec());
    const BinaryMask component = largest_component(voted);
    result.roi = convex_hull_mask(component);
    return result;
}

inline BinaryMask segment(const RealImage& img, const FdbParams& params, const FilterBank& bank,
                          Synthesis synthesis = Synthesis::factorized,
                          ShrinkKind kind = ShrinkKind::soft) {
    return segment_stages(img, params, bank, synthesis, kind).roi;
}

inline BinaryMask segment(const RealImage& img, const FdbParams& params,
                          Synthesis synthesis = Synthesis::factorized,
                          ShrinkKind kind = ShrinkKind::soft) {
    params.validate();
    if (img.empty()) throw std::invalid_argument("segment: empty image");
    const FilterBank bank = build_filter_bank(img.width + 2 * params.pad_margin,
                                              img.height + 2 * params.pad_margin,
                                              params.band_spec(), params.dir_spec());
    return segment(img, params, bank, synthesis, kind);
}

/// Maps an ROI computed at a rescaled resolution back onto the original
/// grid; re-hulling keeps the result convex after nearest-neighbour
/// resampling.
inline BinaryMask restore_mask_size(const BinaryMask& mask, int width, int height) {
    if (mask.width == width && mask.height == height) return mask;
    BinaryMask out = resize_mask_nearest(mask, width, height);
    if (out.count_foreground() > 0) out = convex_hull_mask(out);
    return out;
}

} // namespace fdb
