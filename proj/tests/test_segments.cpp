#include <doctest.h>

#include "helpers.hpp"
#include "morphtest/contour.hpp"
#include "morphtest/segments.hpp"

using namespace morphtest;

namespace {

// 10x10 solid square traced clockwise from (1,1): 36 points, corners at
// indices 0, 9, 18, 27.
ContourPolyline square_contour() {
    BinaryImage mask(12, 12, false);
    for (int y = 1; y <= 10; ++y) {
        for (int x = 1; x <= 10; ++x) mask.set(x, y, true);
    }
    auto contours = trace_contours(mask);
    REQUIRE(contours.size() == 1);
    REQUIRE(contours[0].points.size() == 36);
    return contours[0];
}

}  // namespace

TEST_CASE("rdp keeps only the endpoints of a straight polyline") {
    std::vector<Point> line;
    for (int i = 0; i <= 10; ++i) line.push_back({static_cast<double>(i), 2.0});
    CHECK(rdp_simplify_indices(line, 0.5) == std::vector<int>{0, 10});

    // A bump above tolerance survives.
    line[5].y = 4.0;
    CHECK(rdp_simplify_indices(line, 0.5) == std::vector<int>{0, 5, 10});
}

TEST_CASE("suggest_segments finds the four sides of a square") {
    const ContourPolyline square = square_contour();
    const auto segments = suggest_segments(square, 0.5, 4);
    REQUIRE(segments.size() == 4);
    // One run per side; ranges are disjoint and ordered.
    CHECK(segments[0].range_begin == 0);
    for (std::size_t i = 0; i + 1 < segments.size(); ++i) {
        CHECK(segments[i].range_end <= segments[i + 1].range_begin);
    }
    for (const auto& seg : segments) {
        CHECK(seg.range_length() >= 8);
        CHECK(seg.end_window == 1);
    }
    validate_annotations(segments, {square}, 4);
}

TEST_CASE("suggest_segments refuses impossible counts") {
    const ContourPolyline square = square_contour();
    CHECK_THROWS_WITH_AS(suggest_segments(square, 0.5, 40), doctest::Contains("TooFewVertices"), Error);
}

TEST_CASE("annotations round trip through their file format") {
    const auto dir = testutil::scratch_dir("annot");
    const std::vector<SegmentAnnotation> segs{{0, 0, 0, 10, 1}, {1, 0, 12, 20, 2}, {2, 1, 0, 6, 1}};
    save_annotations(segs, dir / "d.seg");
    CHECK(load_annotations(dir / "d.seg") == segs);

    CHECK_THROWS_WITH_AS(load_annotations(dir / "missing.seg"), doctest::Contains("MissingAnnotations"), Error);
}

TEST_CASE("annotation validation catches bad ranges") {
    const ContourPolyline square = square_contour();
    // Overlapping ranges.
    CHECK_THROWS_WITH_AS(validate_annotations({{0, 0, 0, 10, 1}, {1, 0, 9, 20, 1}}, {square}, -1),
                         doctest::Contains("MalformedAnnotation"), Error);
    // Out-of-range contour index.
    CHECK_THROWS_WITH_AS(validate_annotations({{0, 3, 0, 10, 1}}, {square}, -1),
                         doctest::Contains("MalformedAnnotation"), Error);
    // end_window larger than half the range.
    CHECK_THROWS_WITH_AS(validate_annotations({{0, 0, 0, 4, 3}}, {square}, -1),
                         doctest::Contains("MalformedAnnotation"), Error);
    // Count mismatch.
    CHECK_THROWS_WITH_AS(validate_annotations({{0, 0, 0, 10, 1}}, {square}, 2),
                         doctest::Contains("MalformedAnnotation"), Error);
    // Range past the end of the contour.
    CHECK_THROWS_WITH_AS(validate_annotations({{0, 0, 30, 40, 1}}, {square}, -1),
                         doctest::Contains("MalformedAnnotation"), Error);
}
