#include <doctest.h>

#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "morphtest/contour.hpp"
#include "morphtest/rasterize.hpp"
#include "morphtest/reference.hpp"

using namespace morphtest;

namespace {

std::set<std::pair<int, int>> traced_outer_pixels(const std::vector<ContourPolyline>& contours) {
    std::set<std::pair<int, int>> out;
    for (const ContourPolyline& c : contours) {
        if (c.kind != ContourKind::Outer) continue;
        for (const Point& p : c.points) out.insert({static_cast<int>(p.x), static_cast<int>(p.y)});
    }
    return out;
}

BinaryImage mask_3x3_in_5x5(unsigned bits) {
    BinaryImage mask(5, 5, false);
    for (int i = 0; i < 9; ++i) {
        if (bits & (1u << i)) mask.set(1 + i % 3, 1 + i / 3, true);
    }
    return mask;
}

}  // namespace

TEST_CASE("a 2x2 block traces to its four boundary pixels") {
    BinaryImage mask(4, 4, false);
    mask.set(1, 1, true);
    mask.set(2, 1, true);
    mask.set(1, 2, true);
    mask.set(2, 2, true);
    const auto contours = trace_contours(mask);
    REQUIRE(contours.size() == 1);
    CHECK(contours[0].kind == ContourKind::Outer);
    REQUIRE(contours[0].points.size() == 4);
    CHECK(contours[0].points[0] == Point{1.0, 1.0});  // top-most, left-most anchor
    CHECK(traced_outer_pixels(contours) == std::set<std::pair<int, int>>{{1, 1}, {2, 1}, {1, 2}, {2, 2}});
    CHECK(signed_area(contours[0]) > 0.0);
}

TEST_CASE("single pixels are skipped by default and traceable when allowed") {
    BinaryImage mask(5, 5, false);
    mask.set(2, 2, true);
    CHECK(trace_contours(mask).empty());

    TraceOptions opts;
    opts.min_region_pixels = 1;
    const auto contours = trace_contours(mask, opts);
    REQUIRE(contours.size() == 1);
    CHECK(contours[0].points.size() == 1);
    CHECK(contours[0].points[0] == Point{2.0, 2.0});
}

TEST_CASE("a ring with a one-pixel hole yields the outer contour only") {
    BinaryImage mask(5, 5, false);
    for (int y = 1; y <= 3; ++y) {
        for (int x = 1; x <= 3; ++x) mask.set(x, y, true);
    }
    mask.set(2, 2, false);
    const auto contours = trace_contours(mask);
    REQUIRE(contours.size() == 1);
    CHECK(contours[0].kind == ContourKind::Outer);
    CHECK(contours[0].points.size() == 8);

    TraceOptions opts;
    opts.min_region_pixels = 1;
    const auto with_hole = trace_contours(mask, opts);
    REQUIRE(with_hole.size() == 2);
    CHECK(with_hole[1].kind == ContourKind::Hole);
    CHECK(with_hole[1].points.size() == 1);
}

TEST_CASE("traced pixel sets equal the brute-force boundary for all 512 3x3 masks") {
    for (unsigned bits = 0; bits < 512; ++bits) {
        const BinaryImage mask = mask_3x3_in_5x5(bits);
        const auto contours = trace_contours(mask);
        const auto traced = traced_outer_pixels(contours);

        std::set<std::pair<int, int>> brute;
        for (const auto& px : ref::boundary_pixels(mask, 2)) brute.insert(px);

        INFO("mask bits ", bits);
        CHECK(traced == brute);

        for (const ContourPolyline& c : contours) {
            // Consecutive points are 8-adjacent at trace time.
            for (std::size_t i = 0; i + 1 < c.points.size(); ++i) {
                CHECK(std::abs(c.points[i].x - c.points[i + 1].x) <= 1.0);
                CHECK(std::abs(c.points[i].y - c.points[i + 1].y) <= 1.0);
            }
            // Anchor is the top-most then left-most pixel.
            for (const Point& p : c.points) {
                const bool later_row = p.y > c.points[0].y;
                const bool same_row_right = p.y == c.points[0].y && p.x >= c.points[0].x;
                CHECK((later_row || same_row_right));
            }
            if (c.points.size() >= 3 && c.kind == ContourKind::Outer) CHECK(signed_area(c) >= 0.0);
        }
    }
}

TEST_CASE("a square with a hole traces both contours with opposite orientation") {
    BinaryImage mask(12, 12, false);
    for (int y = 1; y <= 10; ++y) {
        for (int x = 1; x <= 10; ++x) mask.set(x, y, true);
    }
    for (int y = 4; y <= 7; ++y) {
        for (int x = 4; x <= 7; ++x) mask.set(x, y, false);
    }
    const auto contours = trace_contours(mask);
    REQUIRE(contours.size() == 2);
    CHECK(contours[0].kind == ContourKind::Outer);
    CHECK(contours[1].kind == ContourKind::Hole);
    CHECK(signed_area(contours[0]) > 0.0);
    CHECK(signed_area(contours[1]) < 0.0);
    CHECK(contours[1].points[0] == Point{4.0, 4.0});

    // Round trip: rasterizing the traced contours reproduces the mask, hole
    // included.
    const GrayImage img = rasterize(contours, 12, 12, 1);
    for (int y = 0; y < 12; ++y) {
        for (int x = 0; x < 12; ++x) {
            CHECK((img.at(x, y) == 255) == mask.at(x, y));
        }
    }
}

TEST_CASE("trace then rasterize reproduces axis-aligned rectangles exactly") {
    for (int w = 2; w <= 6; ++w) {
        for (int h = 2; h <= 6; ++h) {
            BinaryImage mask(10, 10, false);
            for (int y = 2; y < 2 + h; ++y) {
                for (int x = 3; x < 3 + w; ++x) mask.set(x, y, true);
            }
            const GrayImage img = rasterize(trace_contours(mask), 10, 10, 1);
            INFO("rectangle ", w, "x", h);
            for (int y = 0; y < 10; ++y) {
                for (int x = 0; x < 10; ++x) {
                    CHECK((img.at(x, y) == 255) == mask.at(x, y));
                }
            }
        }
    }
}

TEST_CASE("empty masks trace to nothing") {
    CHECK(trace_contours(BinaryImage(8, 8, false)).empty());
}
