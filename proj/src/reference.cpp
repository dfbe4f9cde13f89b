#include "morphtest/reference.hpp"

#include <algorithm>
#include <cmath>

namespace morphtest::ref {

GrayImage gaussian_blur_dense(const GrayImage& img, bool horizontal, double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        kernel[static_cast<std::size_t>(i + radius)] = std::exp(-0.5 * (i / sigma) * (i / sigma));
        sum += kernel[static_cast<std::size_t>(i + radius)];
    }

    auto reflect = [](int i, int n) {
        while (i < 0 || i >= n) {
            if (i < 0) i = -i - 1;
            if (i >= n) i = 2 * n - 1 - i;
        }
        return i;
    };

    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i) {
                const int sx = horizontal ? reflect(x + i, img.width) : x;
                const int sy = horizontal ? y : reflect(y + i, img.height);
                acc += kernel[static_cast<std::size_t>(i + radius)] * img.at(sx, sy);
            }
            out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::lround(acc / sum), 0L, 255L));
        }
    }
    return out;
}

std::vector<std::pair<int, int>> boundary_pixels(const BinaryImage& mask, int min_component_pixels) {
    const int w = mask.width;
    const int h = mask.height;
    // Component sizes by repeated flood fill.
    std::vector<int> comp(static_cast<std::size_t>(w) * h, -1);
    std::vector<int> sizes;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y) || comp[static_cast<std::size_t>(y) * w + x] >= 0) continue;
            const int id = static_cast<int>(sizes.size());
            sizes.push_back(0);
            std::vector<std::pair<int, int>> stack{{x, y}};
            comp[static_cast<std::size_t>(y) * w + x] = id;
            while (!stack.empty()) {
                auto [cx, cy] = stack.back();
                stack.pop_back();
                ++sizes[static_cast<std::size_t>(id)];
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx;
                        const int ny = cy + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                        if (!mask.at(nx, ny)) continue;
                        int& cell = comp[static_cast<std::size_t>(ny) * w + nx];
                        if (cell < 0) {
                            cell = id;
                            stack.push_back({nx, ny});
                        }
                    }
                }
            }
        }
    }

    std::vector<std::pair<int, int>> out;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!mask.at(x, y)) continue;
            if (sizes[static_cast<std::size_t>(comp[static_cast<std::size_t>(y) * w + x])] < min_component_pixels) {
                continue;
            }
            const bool border = !mask.at_or_background(x - 1, y) || !mask.at_or_background(x + 1, y) ||
                                !mask.at_or_background(x, y - 1) || !mask.at_or_background(x, y + 1);
            if (border) out.push_back({x, y});
        }
    }
    return out;  // row-major scan order is already sorted (y, x)
}

namespace {

constexpr double kEps = 1e-9;

bool on_segment(const Point& a, const Point& b, double x, double y) {
    const double cross = (b.x - a.x) * (y - a.y) - (b.y - a.y) * (x - a.x);
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    if (len == 0.0) return std::abs(x - a.x) <= kEps && std::abs(y - a.y) <= kEps;
    if (std::abs(cross) / len > kEps) return false;
    const double dot = (b.x - a.x) * (x - a.x) + (b.y - a.y) * (y - a.y);
    return dot >= -kEps && dot <= len * len + kEps;
}

bool sample_inside(const std::vector<ContourPolyline>& contours, double x, double y) {
    bool on_outer = false;
    bool on_hole = false;
    int crossings = 0;
    for (const ContourPolyline& contour : contours) {
        const auto& pts = contour.points;
        if (pts.size() < 2) continue;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const Point& a = pts[i];
            const Point& b = pts[(i + 1) % pts.size()];
            if (on_segment(a, b, x, y)) {
                (contour.kind == ContourKind::Outer ? on_outer : on_hole) = true;
            }
            if (std::abs(a.y - b.y) <= kEps) continue;
            if ((a.y > y) != (b.y > y)) {
                const double xc = a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y);
                if (xc > x + kEps) ++crossings;
            }
        }
    }
    if (on_outer) return true;
    if (on_hole) return false;
    return (crossings % 2) == 1;
}

}  // namespace

GrayImage rasterize_pointwise(const std::vector<ContourPolyline>& contours, int width, int height,
                              int supersample) {
    GrayImage out(width, height);
    const int f = supersample;
    for (int py = 0; py < height; ++py) {
        for (int px = 0; px < width; ++px) {
            int hits = 0;
            for (int sy = 0; sy < f; ++sy) {
                for (int sx = 0; sx < f; ++sx) {
                    const double x = (px * f + sx + 0.5) / f - 0.5;
                    const double y = (py * f + sy + 0.5) / f - 0.5;
                    if (sample_inside(contours, x, y)) ++hits;
                }
            }
            out.at(px, py) = static_cast<std::uint8_t>(std::lround(255.0 * hits / (static_cast<double>(f) * f)));
        }
    }
    return out;
}

void matvec_serial(const float* w, const float* b, const float* x, float* y, int rows, int cols) {
    for (int r = 0; r < rows; ++r) {
        float acc = b[r];
        const float* row = w + static_cast<std::size_t>(r) * cols;
        for (int c = 0; c < cols; ++c) acc += row[c] * x[c];
        y[r] = acc;
    }
}

}  // namespace morphtest::ref
