#pragma once

#include <array>
#include <string>
#include <vector>

#include "morphtest/contour.hpp"
#include "morphtest/image.hpp"
#include "morphtest/segments.hpp"

namespace morphtest {

/// Exactly three signed elongation deltas in pixels; one must be zero and
/// all must be pairwise distinct.
struct ElongationLevels {
    std::array<double, 3> deltas{-2.0, 0.0, 2.0};

    void validate() const;
    int zero_index() const;
};

/// Parses "a,b,c" (e.g. "-2,0,2") into validated levels.
ElongationLevels parse_elongation_levels(const std::string& text);

/// A seed glyph with its traced contours and reviewed segment annotations.
struct SeedObject {
    int label = 0;
    GrayImage image;
    std::vector<ContourPolyline> contours;
    std::vector<SegmentAnnotation> segments;
};

/// Binarizes and traces the glyph, attaches the annotations, and validates
/// them against the traced contours. expected_segments < 0 skips the count
/// check.
SeedObject make_seed_object(int label, const GrayImage& image, const std::vector<SegmentAnnotation>& segments,
                            int binarize_threshold = 128, int expected_segments = -1);

/// One (start, end) choice per segment; values index ElongationLevels.
struct ObjectPlan {
    std::vector<std::array<int, 2>> level;

    bool is_identity(const ElongationLevels& levels) const;

    bool operator==(const ObjectPlan&) const = default;
};

/// Moves the end_window points at each end of every annotated segment along
/// the segment direction: the range start by -u * delta_start, the range end
/// by +u * delta_end (positive deltas lengthen outward). Returns edited
/// copies of all contours. Throws DegenerateSegment when a segment's range
/// endpoints coincide.
std::vector<ContourPolyline> elongate(const SeedObject& seed, const ObjectPlan& plan,
                                      const ElongationLevels& levels);

/// Full Cartesian product over segments of 3 start x 3 end deltas, in
/// lexicographic order of the index tuple; 9^k plans for k segments,
/// including the all-zero identity plan.
std::vector<ObjectPlan> enumerate_object_plans(const SeedObject& seed, const ElongationLevels& levels);

/// center_digit of the rasterized elongated contours, at the seed's size.
GrayImage generate_object_image(const SeedObject& seed, const ObjectPlan& plan, const ElongationLevels& levels,
                                int supersample = 4);

}  // namespace morphtest
