#pragma once

#include <filesystem>
#include <vector>

#include "morphtest/contour.hpp"

namespace morphtest {

/// Marks a run of contour points as one line segment of the glyph.
/// point_range is the half-open interval [range_begin, range_end) into the
/// contour's point list; end_window points at each end of the range move
/// during elongation.
struct SegmentAnnotation {
    int segment_id = 0;
    int contour_index = 0;
    int range_begin = 0;
    int range_end = 0;
    int end_window = 1;

    int range_length() const { return range_end - range_begin; }

    bool operator==(const SegmentAnnotation&) const = default;
};

/// Ramer-Douglas-Peucker simplification; returns the sorted indices of the
/// kept vertices (first and last always kept).
std::vector<int> rdp_simplify_indices(const std::vector<Point>& points, double epsilon);

/// Authoring aid: partitions the contour at RDP vertices and proposes the k
/// longest runs as segments, ordered by range start. Suggestions are meant
/// to be reviewed and stored in an annotation file, not used blindly.
/// Throws TooFewVertices when the simplification yields fewer than k runs.
std::vector<SegmentAnnotation> suggest_segments(const ContourPolyline& contour, double epsilon, int k);

/// Plain-text annotation file, one line per segment:
///   segment_id contour_index start_index end_index end_window
/// Comments start with '#'. Throws MissingAnnotations when the file does not
/// exist and MalformedAnnotation on parse errors.
std::vector<SegmentAnnotation> load_annotations(const std::filesystem::path& path);
void save_annotations(const std::vector<SegmentAnnotation>& segments, const std::filesystem::path& path);

/// Checks every annotation against the traced contours: valid contour index
/// and point range, range length >= 2, 1 <= end_window <= range_length / 2,
/// disjoint ranges per contour, unique segment ids. expected_count < 0 skips
/// the count check.
void validate_annotations(const std::vector<SegmentAnnotation>& segments,
                          const std::vector<ContourPolyline>& contours, int expected_count);

}  // namespace morphtest
