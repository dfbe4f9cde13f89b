#pragma once

#include <vector>

#include "morphtest/image.hpp"

namespace morphtest {

struct Point {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point&) const = default;
};

enum class ContourKind { Outer, Hole };

/// Closed boundary walk in pixel coordinates. Outer contours follow the
/// foreground pixels of a component; hole contours follow the background
/// pixels of an enclosed cavity. Consecutive points are 8-adjacent at trace
/// time; the first point is the top-most then left-most pixel of the region.
/// Signed area is positive for outer contours and negative for holes.
struct ContourPolyline {
    std::vector<Point> points;
    ContourKind kind = ContourKind::Outer;
};

struct TraceOptions {
    /// Regions with fewer pixels than this are skipped entirely.
    int min_region_pixels = 2;
};

/// Moore-neighbor boundary tracing with Jacob's stopping criterion over
/// 8-connected foreground components and 4-connected enclosed background
/// cavities. Contours are emitted in row-major order of their anchor pixel.
std::vector<ContourPolyline> trace_contours(const BinaryImage& mask, const TraceOptions& options = {});

/// Shoelace area of the closed polyline (pixel coordinates, y growing down).
double signed_area(const ContourPolyline& contour);

}  // namespace morphtest
