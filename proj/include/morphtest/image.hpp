#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morphtest/errors.hpp"

namespace morphtest {

/// 8-bit grayscale raster, row-major, white foreground on black background
/// (MNIST convention). Pixel (x, y) lives at data[y * width + x].
struct GrayImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    GrayImage() = default;
    GrayImage(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill) {}

    std::uint8_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }

    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
    std::size_t pixel_count() const { return data.size(); }

    bool operator==(const GrayImage&) const = default;
};

/// Boolean mask with the same layout as GrayImage; true = foreground.
struct BinaryImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> mask;  // 0 or 1

    BinaryImage() = default;
    BinaryImage(int w, int h, bool fill = false)
        : width(w), height(h),
          mask(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), fill ? 1 : 0) {}

    bool at(int x, int y) const { return mask[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v) { mask[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }

    /// Out-of-bounds reads count as background.
    bool at_or_background(int x, int y) const {
        return x >= 0 && x < width && y >= 0 && y < height && at(x, y);
    }

    bool operator==(const BinaryImage&) const = default;
};

/// Subpixel intensity-weighted center.
struct Centroid {
    double x = 0.0;
    double y = 0.0;
};

std::int64_t total_intensity(const GrayImage& img);

/// Intensity-weighted centroid. Throws AllBlackImage when total intensity is zero.
Centroid center_of_mass(const GrayImage& img);

/// Shift by integer offsets; pixels moved out of frame are discarded, vacated
/// pixels become 0.
GrayImage translate(const GrayImage& img, int dx, int dy);

/// Translate so the center of mass lands on the geometric center
/// ((W-1)/2, (H-1)/2). Offsets are rounded half away from zero; offsets of
/// magnitude <= 0.5 are treated as already centered, which makes the
/// operation idempotent. Throws AllBlackImage when total intensity is zero.
GrayImage center_digit(const GrayImage& img);

/// mask = intensity >= threshold (boundary inclusive).
BinaryImage binarize(const GrayImage& img, int threshold = 128);

/// Multi-line ASCII rendering, one character per pixel. Debug aid.
std::string ascii_art(const GrayImage& img);

}  // namespace morphtest
