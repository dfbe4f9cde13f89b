#include "morphtest/contour.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <vector>

namespace morphtest {

namespace {

// Clockwise on screen (y down), starting east.
constexpr std::array<int, 8> kDx = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kDy = {0, 1, 1, 1, 0, -1, -1, -1};

struct Cell {
    int x;
    int y;
};

int direction_of(Cell from, Cell to) {
    const int dx = to.x - from.x;
    const int dy = to.y - from.y;
    for (int d = 0; d < 8; ++d) {
        if (kDx[d] == dx && kDy[d] == dy) return d;
    }
    assert(false && "cells are not 8-adjacent");
    return 0;
}

/// Moore-neighbor walk over the region given by `inside`, anchored at the
/// region's top-most then left-most pixel. Terminates with Jacob's
/// criterion: stop when the walk is back at the anchor and about to repeat
/// its first move.
template <typename Inside>
std::vector<Point> moore_trace(Cell start, const Inside& inside, std::size_t step_cap) {
    std::vector<Point> points{{static_cast<double>(start.x), static_cast<double>(start.y)}};
    Cell cur = start;
    int from = 4;  // backtrack is the background pixel west of the anchor
    int first_move = -1;
    for (std::size_t step = 0; step < step_cap; ++step) {
        int move = -1;
        Cell next{};
        for (int k = 1; k <= 8; ++k) {
            const int d = (from + k) % 8;
            const Cell cand{cur.x + kDx[d], cur.y + kDy[d]};
            if (inside(cand.x, cand.y)) {
                move = d;
                // Backtrack for the next step is the last rejected neighbor.
                const int prev = (from + k - 1) % 8;
                next = cand;
                from = direction_of(cand, {cur.x + kDx[prev], cur.y + kDy[prev]});
                break;
            }
        }
        if (move < 0) return points;  // isolated pixel
        if (first_move < 0) {
            first_move = move;
        } else if (cur.x == start.x && cur.y == start.y && move == first_move) {
            break;
        }
        cur = next;
        points.push_back({static_cast<double>(cur.x), static_cast<double>(cur.y)});
    }
    if (points.size() > 1 && points.back() == points.front()) points.pop_back();
    return points;
}

struct Regions {
    std::vector<int> id;  // -1 = unassigned
    std::vector<int> size;
    std::vector<bool> touches_border;  // meaningful for background regions
};

/// Connected-component labels in row-major discovery order. Foreground uses
/// 8-connectivity, background 4-connectivity.
Regions label_regions(const BinaryImage& mask, bool foreground) {
    const int w = mask.width;
    const int h = mask.height;
    Regions out;
    out.id.assign(static_cast<std::size_t>(w) * h, -1);
    std::vector<Cell> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (mask.at(x, y) != foreground || out.id[static_cast<std::size_t>(y) * w + x] >= 0) continue;
            const int region = static_cast<int>(out.size.size());
            out.size.push_back(0);
            out.touches_border.push_back(false);
            stack.push_back({x, y});
            out.id[static_cast<std::size_t>(y) * w + x] = region;
            while (!stack.empty()) {
                const Cell c = stack.back();
                stack.pop_back();
                ++out.size[region];
                if (c.x == 0 || c.y == 0 || c.x == w - 1 || c.y == h - 1) out.touches_border[region] = true;
                const int n_dirs = foreground ? 8 : 4;
                for (int d = 0; d < n_dirs; ++d) {
                    // Background spreads through the 4-neighborhood only
                    // (even direction indices are the axis moves).
                    const int dir = foreground ? d : d * 2;
                    const int nx = c.x + kDx[dir];
                    const int ny = c.y + kDy[dir];
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    std::size_t idx = static_cast<std::size_t>(ny) * w + nx;
                    if (mask.at(nx, ny) == foreground && out.id[idx] < 0) {
                        out.id[idx] = region;
                        stack.push_back({nx, ny});
                    }
                }
            }
        }
    }
    return out;
}

void normalize_orientation(ContourPolyline& contour) {
    const double area = signed_area(contour);
    const bool want_positive = contour.kind == ContourKind::Outer;
    if ((want_positive && area < 0.0) || (!want_positive && area > 0.0)) {
        std::reverse(contour.points.begin() + 1, contour.points.end());
    }
}

}  // namespace

double signed_area(const ContourPolyline& contour) {
    const auto& p = contour.points;
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Point& a = p[i];
        const Point& b = p[(i + 1) % p.size()];
        acc += a.x * b.y - b.x * a.y;
    }
    return acc / 2.0;
}

std::vector<ContourPolyline> trace_contours(const BinaryImage& mask, const TraceOptions& options) {
    std::vector<ContourPolyline> contours;
    if (mask.width <= 0 || mask.height <= 0) return contours;
    const int w = mask.width;
    const Regions fg = label_regions(mask, true);
    const Regions bg = label_regions(mask, false);
    const std::size_t step_cap = mask.mask.size() * 8 + 16;

    std::vector<bool> fg_done(fg.size.size(), false);
    std::vector<bool> bg_done(bg.size.size(), false);
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            const std::size_t idx = static_cast<std::size_t>(y) * w + x;
            if (mask.at(x, y)) {
                const int region = fg.id[idx];
                if (fg_done[region] || fg.size[region] < options.min_region_pixels) continue;
                fg_done[region] = true;
                ContourPolyline c;
                c.kind = ContourKind::Outer;
                c.points = moore_trace({x, y},
                                       [&](int px, int py) {
                                           return px >= 0 && py >= 0 && px < w && py < mask.height &&
                                                  fg.id[static_cast<std::size_t>(py) * w + px] == region;
                                       },
                                       step_cap);
                normalize_orientation(c);
                contours.push_back(std::move(c));
            } else {
                const int region = bg.id[idx];
                if (bg_done[region] || bg.touches_border[region]) continue;
                bg_done[region] = true;
                if (bg.size[region] < options.min_region_pixels) continue;
                ContourPolyline c;
                c.kind = ContourKind::Hole;
                c.points = moore_trace({x, y},
                                       [&](int px, int py) {
                                           return px >= 0 && py >= 0 && px < w && py < mask.height &&
                                                  bg.id[static_cast<std::size_t>(py) * w + px] == region;
                                       },
                                       step_cap);
                normalize_orientation(c);
                contours.push_back(std::move(c));
            }
        }
    }
    return contours;
}

}  // namespace morphtest
