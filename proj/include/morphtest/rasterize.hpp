#pragma once

#include <vector>

#include "morphtest/contour.hpp"

namespace morphtest {

/// Scanline even-odd fill of all contours jointly on a supersampled grid,
/// box-downsampled to width x height. Sample points sit at pixel centers:
/// subsample i of a row maps to coordinate (i + 0.5) / factor - 0.5.
///
/// Boundary convention: a sample on an outer contour edge counts as inside,
/// a sample on a hole contour edge counts as outside. With factor 1 this
/// reproduces traced axis-aligned masks exactly, holes included.
GrayImage rasterize(const std::vector<ContourPolyline>& contours, int width, int height, int supersample = 4);

}  // namespace morphtest
