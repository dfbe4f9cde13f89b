#include "morphtest/segments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace morphtest {

namespace {

double point_to_chord_distance(const Point& a, const Point& b, const Point& p) {
    const double abx = b.x - a.x;
    const double aby = b.y - a.y;
    const double len = std::hypot(abx, aby);
    if (len == 0.0) return std::hypot(p.x - a.x, p.y - a.y);
    return std::abs(abx * (p.y - a.y) - aby * (p.x - a.x)) / len;
}

void rdp_recurse(const std::vector<Point>& pts, int begin, int end, double epsilon, std::vector<int>& keep) {
    if (end - begin < 2) return;
    double max_dist = -1.0;
    int split = begin;
    for (int i = begin + 1; i < end; ++i) {
        const double d = point_to_chord_distance(pts[begin], pts[end], pts[i]);
        if (d > max_dist) {
            max_dist = d;
            split = i;
        }
    }
    if (max_dist > epsilon) {
        rdp_recurse(pts, begin, split, epsilon, keep);
        keep.push_back(split);
        rdp_recurse(pts, split, end, epsilon, keep);
    }
}

}  // namespace

std::vector<int> rdp_simplify_indices(const std::vector<Point>& points, double epsilon) {
    if (points.size() < 2) return points.empty() ? std::vector<int>{} : std::vector<int>{0};
    std::vector<int> keep{0};
    rdp_recurse(points, 0, static_cast<int>(points.size()) - 1, epsilon, keep);
    keep.push_back(static_cast<int>(points.size()) - 1);
    return keep;
}

std::vector<SegmentAnnotation> suggest_segments(const ContourPolyline& contour, double epsilon, int k) {
    if (k < 1) fail(Errc::TooFewVertices, "segment count must be >= 1");
    const std::vector<int> kept = rdp_simplify_indices(contour.points, epsilon);

    struct Run {
        int begin;
        int end;  // inclusive vertex index
    };
    std::vector<Run> runs;
    for (std::size_t i = 0; i + 1 < kept.size(); ++i) runs.push_back({kept[i], kept[i + 1]});
    std::stable_sort(runs.begin(), runs.end(),
                     [](const Run& a, const Run& b) { return (a.end - a.begin) > (b.end - b.begin); });
    if (static_cast<int>(runs.size()) < k) {
        fail(Errc::TooFewVertices, "simplification yields " + std::to_string(runs.size()) + " runs, need " +
                                       std::to_string(k));
    }
    runs.resize(static_cast<std::size_t>(k));
    std::sort(runs.begin(), runs.end(), [](const Run& a, const Run& b) { return a.begin < b.begin; });

    std::vector<SegmentAnnotation> out;
    int prev_end = 0;  // exclusive
    for (const Run& run : runs) {
        SegmentAnnotation seg;
        seg.segment_id = static_cast<int>(out.size());
        seg.contour_index = 0;
        // Adjacent runs share the RDP vertex; trim so ranges stay disjoint.
        seg.range_begin = std::max(run.begin, prev_end);
        seg.range_end = run.end + 1;
        seg.end_window = 1;
        if (seg.range_length() < 2) {
            fail(Errc::TooFewVertices, "run too short after trimming at index " + std::to_string(run.begin));
        }
        prev_end = seg.range_end;
        out.push_back(seg);
    }
    return out;
}

std::vector<SegmentAnnotation> load_annotations(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::MissingAnnotations, "no annotation file at " + path.string());
    std::vector<SegmentAnnotation> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        SegmentAnnotation seg;
        if (!(ls >> seg.segment_id)) continue;  // blank line
        if (!(ls >> seg.contour_index >> seg.range_begin >> seg.range_end >> seg.end_window)) {
            fail(Errc::MalformedAnnotation, path.string() + ":" + std::to_string(lineno) + ": expected 5 fields");
        }
        std::string extra;
        if (ls >> extra) {
            fail(Errc::MalformedAnnotation,
                 path.string() + ":" + std::to_string(lineno) + ": trailing token '" + extra + "'");
        }
        out.push_back(seg);
    }
    return out;
}

void save_annotations(const std::vector<SegmentAnnotation>& segments, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(Errc::IoFailure, "cannot open " + path.string() + " for writing");
    out << "# segment_id contour_index start_index end_index end_window\n";
    for (const SegmentAnnotation& seg : segments) {
        out << seg.segment_id << ' ' << seg.contour_index << ' ' << seg.range_begin << ' ' << seg.range_end
            << ' ' << seg.end_window << '\n';
    }
}

void validate_annotations(const std::vector<SegmentAnnotation>& segments,
                          const std::vector<ContourPolyline>& contours, int expected_count) {
    if (expected_count >= 0 && static_cast<int>(segments.size()) != expected_count) {
        fail(Errc::MalformedAnnotation, "expected " + std::to_string(expected_count) + " segments, got " +
                                            std::to_string(segments.size()));
    }
    std::map<int, std::vector<std::pair<int, int>>> ranges_per_contour;
    std::vector<int> seen_ids;
    for (const SegmentAnnotation& seg : segments) {
        const std::string where = "segment " + std::to_string(seg.segment_id);
        if (std::find(seen_ids.begin(), seen_ids.end(), seg.segment_id) != seen_ids.end()) {
            fail(Errc::MalformedAnnotation, where + ": duplicate id");
        }
        seen_ids.push_back(seg.segment_id);
        if (seg.contour_index < 0 || seg.contour_index >= static_cast<int>(contours.size())) {
            fail(Errc::MalformedAnnotation, where + ": contour index " + std::to_string(seg.contour_index) +
                                                " out of range (have " + std::to_string(contours.size()) + ")");
        }
        const int n = static_cast<int>(contours[static_cast<std::size_t>(seg.contour_index)].points.size());
        if (seg.range_begin < 0 || seg.range_end > n || seg.range_length() < 2) {
            fail(Errc::MalformedAnnotation, where + ": bad point range");
        }
        if (seg.end_window < 1 || seg.end_window > seg.range_length() / 2) {
            fail(Errc::MalformedAnnotation, where + ": end_window out of bounds");
        }
        ranges_per_contour[seg.contour_index].push_back({seg.range_begin, seg.range_end});
    }
    for (auto& [contour_index, ranges] : ranges_per_contour) {
        std::sort(ranges.begin(), ranges.end());
        for (std::size_t i = 0; i + 1 < ranges.size(); ++i) {
            if (ranges[i].second > ranges[i + 1].first) {
                fail(Errc::MalformedAnnotation,
                     "overlapping ranges on contour " + std::to_string(contour_index));
            }
        }
    }
}

}  // namespace morphtest
