#pragma once

#include <cstdint>
#include <vector>

#include "morphtest/image.hpp"
#include "morphtest/mlp.hpp"

namespace morphtest {

/// k-nearest-neighbor vote on raw intensities (Euclidean distance).
/// Distance ties resolve toward the lower reference index, vote ties toward
/// the lower label; scores are vote fractions. Throws EmptyReference.
Prediction knn_classify(const std::vector<GrayImage>& reference_images,
                        const std::vector<std::uint8_t>& reference_labels, int k, const GrayImage& img);

}  // namespace morphtest
