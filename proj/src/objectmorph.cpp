#include "morphtest/objectmorph.hpp"

#include <cmath>
#include <sstream>

#include "morphtest/rasterize.hpp"

namespace morphtest {

void ElongationLevels::validate() const {
    bool has_zero = false;
    for (int i = 0; i < 3; ++i) {
        if (!std::isfinite(deltas[i])) fail(Errc::MalformedGrid, "elongation delta not finite");
        if (deltas[i] == 0.0) has_zero = true;
        for (int j = i + 1; j < 3; ++j) {
            if (deltas[i] == deltas[j]) fail(Errc::MalformedGrid, "elongation deltas must be distinct");
        }
    }
    if (!has_zero) fail(Errc::MalformedGrid, "one elongation delta must be zero");
}

int ElongationLevels::zero_index() const {
    for (int i = 0; i < 3; ++i) {
        if (deltas[i] == 0.0) return i;
    }
    fail(Errc::MalformedGrid, "no zero elongation delta");
}

ElongationLevels parse_elongation_levels(const std::string& text) {
    ElongationLevels out;
    std::istringstream in(text);
    std::string tok;
    for (int i = 0; i < 3; ++i) {
        if (!std::getline(in, tok, ',')) fail(Errc::MalformedGrid, "elongation levels need 3 values: " + text);
        try {
            out.deltas[static_cast<std::size_t>(i)] = std::stod(tok);
        } catch (const std::exception&) {
            fail(Errc::MalformedGrid, "bad elongation delta '" + tok + "'");
        }
    }
    if (std::getline(in, tok, ',')) fail(Errc::MalformedGrid, "elongation levels need exactly 3 values: " + text);
    out.validate();
    return out;
}

SeedObject make_seed_object(int label, const GrayImage& image, const std::vector<SegmentAnnotation>& segments,
                            int binarize_threshold, int expected_segments) {
    SeedObject seed;
    seed.label = label;
    seed.image = image;
    seed.contours = trace_contours(binarize(image, binarize_threshold));
    seed.segments = segments;
    validate_annotations(seed.segments, seed.contours, expected_segments);
    return seed;
}

bool ObjectPlan::is_identity(const ElongationLevels& levels) const {
    const int zero = levels.zero_index();
    for (const auto& pair : level) {
        if (pair[0] != zero || pair[1] != zero) return false;
    }
    return true;
}

std::vector<ContourPolyline> elongate(const SeedObject& seed, const ObjectPlan& plan,
                                      const ElongationLevels& levels) {
    if (plan.level.size() != seed.segments.size()) {
        fail(Errc::MalformedAnnotation, "plan covers " + std::to_string(plan.level.size()) + " segments, seed has " +
                                            std::to_string(seed.segments.size()));
    }
    levels.validate();
    std::vector<ContourPolyline> contours = seed.contours;
    for (std::size_t s = 0; s < seed.segments.size(); ++s) {
        const SegmentAnnotation& seg = seed.segments[s];
        auto& pts = contours[static_cast<std::size_t>(seg.contour_index)].points;
        const Point first = pts[static_cast<std::size_t>(seg.range_begin)];
        const Point last = pts[static_cast<std::size_t>(seg.range_end - 1)];
        const double dx = last.x - first.x;
        const double dy = last.y - first.y;
        const double len = std::hypot(dx, dy);
        if (len == 0.0) {
            fail(Errc::DegenerateSegment, "segment " + std::to_string(seg.segment_id) + " has coincident endpoints");
        }
        const double ux = dx / len;
        const double uy = dy / len;
        const double delta_start = levels.deltas[static_cast<std::size_t>(plan.level[s][0])];
        const double delta_end = levels.deltas[static_cast<std::size_t>(plan.level[s][1])];
        for (int i = 0; i < seg.end_window; ++i) {
            Point& p = pts[static_cast<std::size_t>(seg.range_begin + i)];
            p.x -= ux * delta_start;
            p.y -= uy * delta_start;
        }
        for (int i = 0; i < seg.end_window; ++i) {
            Point& p = pts[static_cast<std::size_t>(seg.range_end - 1 - i)];
            p.x += ux * delta_end;
            p.y += uy * delta_end;
        }
    }
    return contours;
}

std::vector<ObjectPlan> enumerate_object_plans(const SeedObject& seed, const ElongationLevels& levels) {
    levels.validate();
    const std::size_t k = seed.segments.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= 9;
    std::vector<ObjectPlan> plans;
    plans.reserve(total);
    ObjectPlan plan;
    plan.level.assign(k, {0, 0});
    for (std::size_t rank = 0; rank < total; ++rank) {
        std::size_t rest = rank;
        for (std::size_t s = k; s-- > 0;) {
            const int pair = static_cast<int>(rest % 9);
            rest /= 9;
            plan.level[s] = {pair / 3, pair % 3};
        }
        plans.push_back(plan);
    }
    return plans;
}

GrayImage generate_object_image(const SeedObject& seed, const ObjectPlan& plan, const ElongationLevels& levels,
                                int supersample) {
    const std::vector<ContourPolyline> contours = elongate(seed, plan, levels);
    return center_digit(rasterize(contours, seed.image.width, seed.image.height, supersample));
}

}  // namespace morphtest
