#include <doctest.h>

#include <map>
#include <random>

#include "fdb/evaluation.hpp"
#include "fdb/segmentation.hpp"
#include "helpers.hpp"

using fdb::BinaryMask;
using fdb::MorphologySpec;
using fdb::RealImage;

namespace {

// Brute-force block vote straight from the definition.
BinaryMask block_vote_reference(const BinaryMask& mask, const MorphologySpec& m) {
    BinaryMask out(mask.width, mask.height);
    const int s = m.block_size;
    const int half = s / 2;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            int votes = 0;
            for (int by = -1; by <= 1; ++by) {
                for (int bx = -1; bx <= 1; ++bx) {
                    int count = 0;
                    for (int dy = -half; dy <= half; ++dy) {
                        for (int dx = -half; dx <= half; ++dx) {
                            const int px = x + bx * s + dx;
                            const int py = y + by * s + dy;
                            if (px >= 0 && py >= 0 && px < mask.width && py < mask.height)
                                count += mask.at(px, py);
                        }
                    }
                    if (count >= static_cast<double>(s) * s / m.count_divisor) ++votes;
                }
            }
            out.at(x, y) = votes >= m.votes_required ? 1 : 0;
        }
    }
    return out;
}

// Component labelling by iterated propagation until fixpoint; deliberately
// unlike the stack-based flood fill in the library.
BinaryMask largest_component_reference(const BinaryMask& mask) {
    const int w = mask.width, h = mask.height;
    std::vector<int> label(mask.size());
    for (std::size_t i = 0; i < mask.size(); ++i)
        label[i] = mask.data[i] ? static_cast<int>(i) : -1;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const std::size_t i = static_cast<std::size_t>(y) * w + x;
                if (label[i] < 0) continue;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx, ny = y + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        const std::size_t j = static_cast<std::size_t>(ny) * w + nx;
                        if (label[j] >= 0 && label[j] < label[i]) {
                            label[i] = label[j];
                            changed = true;
                        }
                    }
            }
    }
    std::map<int, std::size_t> sizes;
    for (int v : label)
        if (v >= 0) ++sizes[v];
    int best = -1;
    std::size_t best_size = 0;
    for (const auto& [id, size] : sizes)
        if (size > best_size) {
            best = id;
            best_size = size;
        }
    BinaryMask out(w, h);
    for (std::size_t i = 0; i < out.size(); ++i)
        out.data[i] = (best >= 0 && label[i] == best) ? 1 : 0;
    return out;
}

// O(n^3) hull membership: a pixel is inside iff no point pair defines a
// half-plane with every white point on one side and the pixel strictly on
// the other.
BinaryMask convex_hull_reference(const BinaryMask& mask) {
    std::vector<std::pair<long long, long long>> pts;
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (mask.at(x, y)) pts.emplace_back(x, y);
    BinaryMask out(mask.width, mask.height);
    if (pts.empty()) return out;
    if (pts.size() == 1) {
        out.at(static_cast<int>(pts[0].first), static_cast<int>(pts[0].second)) = 1;
        return out;
    }

    const auto cross = [](std::pair<long long, long long> o, std::pair<long long, long long> a,
                          std::pair<long long, long long> b) {
        return (a.first - o.first) * (b.second - o.second) -
               (a.second - o.second) * (b.first - o.first);
    };

    bool degenerate = true;
    std::pair<long long, long long> ref_a = pts.front(), ref_b = pts.front();
    for (const auto& q : pts)
        if (q != ref_a) {
            ref_b = q;
            break;
        }
    for (const auto& q : pts)
        if (cross(ref_a, ref_b, q) != 0) {
            degenerate = false;
            break;
        }

    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const std::pair<long long, long long> p{x, y};
            bool outside = false;
            if (degenerate) {
                long long lo_x = pts[0].first, hi_x = pts[0].first;
                long long lo_y = pts[0].second, hi_y = pts[0].second;
                for (const auto& q : pts) {
                    lo_x = std::min(lo_x, q.first);
                    hi_x = std::max(hi_x, q.first);
                    lo_y = std::min(lo_y, q.second);
                    hi_y = std::max(hi_y, q.second);
                }
                outside = cross(ref_a, ref_b, p) != 0 || p.first < lo_x || p.first > hi_x ||
                          p.second < lo_y || p.second > hi_y;
            } else {
                for (std::size_t i = 0; i < pts.size() && !outside; ++i) {
                    for (std::size_t j = 0; j < pts.size() && !outside; ++j) {
                        if (i == j) continue;
                        bool all_left = true;
                        for (const auto& q : pts)
                            if (cross(pts[i], pts[j], q) < 0) {
                                all_left = false;
                                break;
                            }
                        if (all_left && cross(pts[i], pts[j], p) < 0) outside = true;
                    }
                }
            }
            out.at(x, y) = outside ? 0 : 1;
        }
    }
    return out;
}

} // namespace

TEST_SUITE("segmentation") {

TEST_CASE("binarize thresholds at C times the maximum") {
    RealImage feature(2, 2);
    feature.at(0, 0) = 10.0;
    feature.at(1, 0) = 0.7;
    feature.at(0, 1) = 0.5;
    feature.at(1, 1) = 0.6;
    const BinaryMask mask = fdb::binarize(feature, 0.06);
    CHECK(mask.at(0, 0) == 1);
    CHECK(mask.at(1, 0) == 1); // 0.7 >= 0.6
    CHECK(mask.at(0, 1) == 0); // 0.5 < 0.6
    CHECK(mask.at(1, 1) == 1); // 0.6 >= 0.6 inclusive
}

TEST_CASE("binarize with C=0 keeps every nonnegative pixel") {
    RealImage feature(3, 1);
    feature.at(0, 0) = -1.0;
    feature.at(1, 0) = 0.0;
    feature.at(2, 0) = 2.0;
    const BinaryMask mask = fdb::binarize(feature, 0.0);
    CHECK(mask.at(0, 0) == 0);
    CHECK(mask.at(1, 0) == 1);
    CHECK(mask.at(2, 0) == 1);
}

TEST_CASE("binarize matches the scalar comparison oracle") {
    const RealImage feature = testutil::random_image(24, 17, 401, -50.0, 50.0);
    double mx = feature.data[0];
    for (double v : feature.data) mx = std::max(mx, v);
    for (double c : {0.0, 0.06, 0.5, 1.0}) {
        const BinaryMask mask = fdb::binarize(feature, c);
        for (std::size_t i = 0; i < feature.size(); ++i)
            CHECK(mask.data[i] == (feature.data[i] >= c * mx ? 1 : 0));
    }
}

TEST_CASE("binarize of a nonpositive feature image is empty") {
    const RealImage feature = testutil::random_image(8, 8, 402, -100.0, -1.0);
    const BinaryMask mask = fdb::binarize(feature, 0.06);
    CHECK(mask.count_foreground() == 0);
}

TEST_CASE("raising C never adds foreground") {
    const RealImage feature = testutil::random_image(16, 16, 403, -10.0, 90.0);
    BinaryMask prev = fdb::binarize(feature, 0.0);
    for (double c : {0.05, 0.25, 0.5, 0.9, 1.0}) {
        const BinaryMask next = fdb::binarize(feature, c);
        for (std::size_t i = 0; i < next.size(); ++i)
            if (next.data[i]) CHECK(prev.data[i] == 1);
        prev = next;
    }
}

TEST_CASE("block vote passes a deep interior of an all-white mask") {
    const BinaryMask all_white(64, 64, 1);
    const BinaryMask out = fdb::block_vote(all_white, MorphologySpec{9, 5.0, 6});
    CHECK(out.at(32, 32) == 1);
    CHECK(out.at(20, 40) == 1);
}

TEST_CASE("block vote of an all-black mask is all-black") {
    const BinaryMask all_black(32, 32, 0);
    const BinaryMask out = fdb::block_vote(all_black, MorphologySpec{3, 2.0, 4});
    CHECK(out.count_foreground() == 0);
}

TEST_CASE("block vote agrees pixel-exactly with the counting oracle") {
    for (unsigned seed = 0; seed < 5; ++seed) {
        const BinaryMask mask = testutil::random_mask(32, 32, 404 + seed, 0.35);
        for (const MorphologySpec m : {MorphologySpec{3, 2.0, 4}, MorphologySpec{9, 5.0, 6}}) {
            const BinaryMask got = fdb::block_vote(mask, m);
            const BinaryMask expected = block_vote_reference(mask, m);
            CHECK(got.data == expected.data);
        }
    }
}

TEST_CASE("block vote is monotone in the input mask") {
    const BinaryMask base = testutil::random_mask(24, 24, 409, 0.3);
    BinaryMask grown = base;
    std::mt19937 rng(410);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(base.size()) - 1);
    for (int i = 0; i < 60; ++i) grown.data[pick(rng)] = 1;

    const MorphologySpec m{3, 2.0, 4};
    const BinaryMask out_base = fdb::block_vote(base, m);
    const BinaryMask out_grown = fdb::block_vote(grown, m);
    for (std::size_t i = 0; i < out_base.size(); ++i)
        if (out_base.data[i]) CHECK(out_grown.data[i] == 1);
}

TEST_CASE("largest component keeps the bigger of two blobs") {
    BinaryMask mask(20, 10);
    for (int x = 0; x < 10; ++x) mask.at(x, 2) = 1;       // 10 pixels
    for (int x = 14; x < 19; ++x) mask.at(x, 7) = 1;      // 5 pixels
    const BinaryMask out = fdb::largest_component(mask);
    CHECK(out.count_foreground() == 10);
    for (int x = 0; x < 10; ++x) CHECK(out.at(x, 2) == 1);
}

TEST_CASE("largest component of a single pixel is that pixel") {
    BinaryMask mask(5, 5);
    mask.at(3, 1) = 1;
    const BinaryMask out = fdb::largest_component(mask);
    CHECK(out.count_foreground() == 1);
    CHECK(out.at(3, 1) == 1);
}

TEST_CASE("largest component matches the propagation oracle") {
    for (unsigned seed = 0; seed < 6; ++seed) {
        const BinaryMask mask = testutil::random_mask(24, 24, 420 + seed, 0.42);
        const BinaryMask got = fdb::largest_component(mask);
        const BinaryMask expected = largest_component_reference(mask);
        // random masks at this density have a unique largest component
        CHECK(got.data == expected.data);
    }
    CHECK(fdb::largest_component(BinaryMask(8, 8)).count_foreground() == 0);
}

TEST_CASE("largest component output is a subset of the input") {
    const BinaryMask mask = testutil::random_mask(16, 16, 430, 0.5);
    const BinaryMask out = fdb::largest_component(mask);
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (out.data[i]) CHECK(mask.data[i] == 1);
}

TEST_CASE("hull of a single pixel is that pixel") {
    BinaryMask mask(7, 7);
    mask.at(2, 5) = 1;
    const BinaryMask out = fdb::convex_hull_mask(mask);
    CHECK(out.count_foreground() == 1);
    CHECK(out.at(2, 5) == 1);
}

TEST_CASE("hull of four rectangle corners fills the rectangle") {
    BinaryMask mask(12, 9);
    mask.at(2, 1) = mask.at(9, 1) = mask.at(2, 6) = mask.at(9, 6) = 1;
    const BinaryMask out = fdb::convex_hull_mask(mask);
    for (int y = 0; y < 9; ++y)
        for (int x = 0; x < 12; ++x) {
            const bool inside = x >= 2 && x <= 9 && y >= 1 && y <= 6;
            CHECK(out.at(x, y) == (inside ? 1 : 0));
        }
}

TEST_CASE("hull mask agrees pixel-exactly with the half-plane oracle") {
    std::mt19937 rng(440);
    std::uniform_int_distribution<int> coord(0, 63);
    for (int set = 0; set < 10; ++set) {
        BinaryMask mask(64, 64);
        for (int i = 0; i < 50; ++i) mask.at(coord(rng), coord(rng)) = 1;
        const BinaryMask got = fdb::convex_hull_mask(mask);
        const BinaryMask expected = convex_hull_reference(mask);
        CHECK(got.data == expected.data);
    }
}

TEST_CASE("hull handles collinear and empty inputs") {
    BinaryMask diag(10, 10);
    for (int i = 2; i < 8; i += 2) diag.at(i, i) = 1;
    const BinaryMask out = fdb::convex_hull_mask(diag);
    const BinaryMask expected = convex_hull_reference(diag);
    CHECK(out.data == expected.data);

    CHECK(fdb::convex_hull_mask(BinaryMask(6, 6)).count_foreground() == 0);
}

TEST_CASE("hull output contains the input foreground") {
    const BinaryMask mask = testutil::random_mask(20, 20, 441, 0.1);
    const BinaryMask out = fdb::convex_hull_mask(mask);
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask.data[i]) CHECK(out.data[i] == 1);
}

TEST_CASE("segment of a constant image is an empty ROI") {
    fdb::FdbParams params;
    params.pad_margin = 8;
    const RealImage flat(48, 48, 200.0);
    const BinaryMask roi = fdb::segment(flat, params);
    CHECK(roi.width == 48);
    CHECK(roi.height == 48);
    CHECK(roi.count_foreground() == 0);

    const BinaryMask roi_zero = fdb::segment(RealImage(48, 48, 0.0), params);
    CHECK(roi_zero.count_foreground() == 0);
}

TEST_CASE("segment recovers a synthetic ridge disk") {
    fdb::FdbParams params; // defaults: C=0.06, gamma=1, t=5, s=9, b=6
    const testutil::RidgeDisk scene =
        testutil::make_ridge_disk(128, 128, 40.0, 8.0, 0.5, 5.0, 450);
    const BinaryMask roi = fdb::segment(scene.image, params);
    REQUIRE(roi.width == 128);
    REQUIRE(roi.height == 128);

    const fdb::EvalResult score = fdb::error_rate(roi, scene.truth);
    CHECK(score.err < 0.10);

    // convexity: the ROI is a fixed point of the hull operator
    if (roi.count_foreground() > 0) {
        const BinaryMask hulled = fdb::convex_hull_mask(roi);
        CHECK(hulled.data == roi.data);
    }
}

TEST_CASE("morphology spec validation") {
    CHECK_THROWS_AS((MorphologySpec{4, 5.0, 6}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((MorphologySpec{9, 0.0, 6}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((MorphologySpec{9, 5.0, 0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((MorphologySpec{9, 5.0, 10}.validate()), std::invalid_argument);
    CHECK_NOTHROW((MorphologySpec{9, 5.0, 6}.validate()));
}

} // TEST_SUITE
