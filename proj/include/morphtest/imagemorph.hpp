#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "morphtest/image.hpp"

namespace morphtest {

/// The six whole-image operator families, listed in application order.
enum class OperatorFamily { BlurX, BlurY, Noise, Shear, Rotate, Erode };

inline constexpr int kFamilyCount = 6;
inline constexpr int kLevelsPerFamily = 3;

const char* family_name(OperatorFamily f);

/// Three parameter levels per family. Defaults keep the distorted glyphs
/// human-legible; every value can be overridden from a grid file.
struct LevelGrid {
    std::array<double, 3> blur_x{0.5, 1.0, 1.5};  // Gaussian sigma, pixels
    std::array<double, 3> blur_y{0.5, 1.0, 1.5};
    std::array<double, 3> noise{8.0, 16.0, 24.0};  // Gaussian sigma, gray levels
    std::array<double, 3> shear{0.1, 0.2, 0.3};    // dimensionless factor
    std::array<double, 3> rotate{5.0, 10.0, 15.0};  // degrees
    std::array<int, 3> erode{1, 2, 3};              // iterations

    /// Throws MalformedGrid on non-finite values or erosion iterations < 1.
    void validate() const;
};

/// Flat key-value grid file: one line per family with three numbers, plus an
/// optional suite_seed line. '#' starts a comment. Unknown keys are rejected.
struct GridFile {
    LevelGrid grid;
    std::uint64_t suite_seed = 0;
    bool has_suite_seed = false;
};

GridFile load_grid_file(const std::filesystem::path& path);
void save_grid_file(const LevelGrid& grid, std::uint64_t suite_seed, const std::filesystem::path& path);

/// One chosen level per family; identity of the plan is the index 6-tuple.
/// case_seed drives the noise stage only.
struct TransformPlan {
    std::array<int, kFamilyCount> level{};  // index 0..2, ordered as OperatorFamily
    std::uint64_t case_seed = 0;

    bool operator==(const TransformPlan&) const = default;
};

/// Separable Gaussian blur along one axis. Kernel radius = ceil(3*sigma),
/// normalized to unit sum, reflecting samples at the border. Throws
/// NonPositiveSigma.
GrayImage gaussian_blur_1d(const GrayImage& img, OperatorFamily axis, double sigma);

/// Adds round(N(0, sigma^2)) per pixel, clamped to [0, 255]. The stream is a
/// seeded Box-Muller over SplitMix64, so equal (image, sigma, seed) gives
/// byte-identical output on every platform.
GrayImage add_gaussian_noise(const GrayImage& img, double sigma, std::uint64_t seed);

/// Horizontal shear about the image center: source x' = x - factor*(y - cy),
/// bilinear sampling, reads outside the frame are 0.
GrayImage shear_horizontal(const GrayImage& img, double factor);

/// Rotation about the image center by inverse mapping with bilinear
/// sampling; positive angles turn the glyph clockwise on screen.
GrayImage rotate(const GrayImage& img, double degrees);

/// Grayscale erosion with a 3x3 cross element, `iterations` passes. Pixels
/// outside the frame count as 255 so erosion cannot grow the foreground.
GrayImage erode(const GrayImage& img, int iterations);

/// Applies all six families at the plan's levels in the fixed order
/// BlurX, BlurY, Noise, Shear, Rotate, Erode.
GrayImage apply_plan(const GrayImage& img, const LevelGrid& grid, const TransformPlan& plan);

/// Full Cartesian product of level indices in lexicographic order
/// (BlurX slowest), 3^6 = 729 plans. case_seed is derived from suite_seed
/// and the plan's rank.
std::vector<TransformPlan> enumerate_plans(const LevelGrid& grid, std::uint64_t suite_seed);

}  // namespace morphtest
