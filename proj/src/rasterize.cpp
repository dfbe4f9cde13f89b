#include "morphtest/rasterize.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace morphtest {

namespace {

constexpr double kEps = 1e-9;

struct RowMarks {
    std::vector<double> crossings;                    // even-odd toggle positions
    std::vector<std::pair<double, double>> on_outer;  // [lo, hi] sample-on-edge intervals
    std::vector<std::pair<double, double>> on_hole;
};

void collect_row(const std::vector<ContourPolyline>& contours, double y, RowMarks& row) {
    row.crossings.clear();
    row.on_outer.clear();
    row.on_hole.clear();
    for (const ContourPolyline& contour : contours) {
        const auto& pts = contour.points;
        if (pts.size() < 2) continue;
        auto& on = contour.kind == ContourKind::Outer ? row.on_outer : row.on_hole;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Point& a = pts[i];
            const Point& b = pts[(i + 1) % pts.size()];
            if (std::abs(a.y - b.y) <= kEps) {
                if (std::abs(a.y - y) <= kEps) {
                    on.push_back({std::min(a.x, b.x) - kEps, std::max(a.x, b.x) + kEps});
                }
                continue;
            }
            if ((a.y > y) != (b.y > y)) {
                const double xc = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
                row.crossings.push_back(xc);
                on.push_back({xc - kEps, xc + kEps});
            }
            // Vertices resting exactly on the row are on the polygon even
            // when the half-open crossing rule skips them.
            if (std::abs(a.y - y) <= kEps) on.push_back({a.x - kEps, a.x + kEps});
        }
    }
    std::sort(row.crossings.begin(), row.crossings.end());
    std::sort(row.on_outer.begin(), row.on_outer.end());
    std::sort(row.on_hole.begin(), row.on_hole.end());
}

bool covered(const std::vector<std::pair<double, double>>& intervals, double x) {
    auto it = std::upper_bound(intervals.begin(), intervals.end(), std::make_pair(x, 1e300));
    while (it != intervals.begin()) {
        --it;
        if (x >= it->first && x <= it->second) return true;
    }
    return false;
}

}  // namespace

GrayImage rasterize(const std::vector<ContourPolyline>& contours, int width, int height, int supersample) {
    if (width < 1 || height < 1 || supersample < 1) {
        fail(Errc::DimensionMismatch, "rasterize needs positive dimensions and supersample factor");
    }
    GrayImage out(width, height);
    const int f = supersample;
    const double samples_per_pixel = static_cast<double>(f) * f;

    RowMarks row;
    std::vector<int> hits(static_cast<std::size_t>(width));
    for (int py = 0; py < height; ++py) {
        std::fill(hits.begin(), hits.end(), 0);
        for (int sy = 0; sy < f; ++sy) {
            const double y = (py * f + sy + 0.5) / f - 0.5;
            collect_row(contours, y, row);
            if (row.crossings.empty() && row.on_outer.empty()) continue;
            std::size_t next_cross = 0;
            for (int px = 0; px < width; ++px) {
                for (int sx = 0; sx < f; ++sx) {
                    const double x = (px * f + sx + 0.5) / f - 0.5;
                    while (next_cross < row.crossings.size() && row.crossings[next_cross] < x - kEps) {
                        ++next_cross;
                    }
                    bool inside;
                    if (covered(row.on_outer, x)) {
                        inside = true;
                    } else if (covered(row.on_hole, x)) {
                        inside = false;
                    } else {
                        inside = (next_cross % 2) == 1;
                    }
                    if (inside) ++hits[static_cast<std::size_t>(px)];
                }
            }
        }
        for (int px = 0; px < width; ++px) {
            out.at(px, py) =
                static_cast<std::uint8_t>(std::lround(255.0 * hits[static_cast<std::size_t>(px)] / samples_per_pixel));
        }
    }
    return out;
}

}  // namespace morphtest
