#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "morphtest/contour.hpp"
#include "morphtest/image.hpp"

namespace morphtest::ref {

/// Serial reference kernels. These take the direct, unoptimized route so the
/// production implementations can be checked against an independent path;
/// the benchmark target also times the two side by side.

/// Dense 1-D Gaussian convolution along x (horizontal = true) or y, with
/// half-sample reflection at the borders. The kernel is rebuilt from scratch
/// here rather than shared with the production code.
GrayImage gaussian_blur_dense(const GrayImage& img, bool horizontal, double sigma);

/// Foreground pixels 4-adjacent to background (or to the frame), restricted
/// to 8-connected components of at least min_component_pixels. Returned
/// sorted row-major as (x, y) pairs.
std::vector<std::pair<int, int>> boundary_pixels(const BinaryImage& mask, int min_component_pixels = 2);

/// Rasterization by per-sample point-in-polygon tests, no scanline sharing:
/// every supersample runs its own crossing count and on-edge scan.
GrayImage rasterize_pointwise(const std::vector<ContourPolyline>& contours, int width, int height,
                              int supersample = 4);

/// Plain single-threaded matrix-vector product y = W x + b with W row-major
/// (rows x cols).
void matvec_serial(const float* w, const float* b, const float* x, float* y, int rows, int cols);

}  // namespace morphtest::ref
