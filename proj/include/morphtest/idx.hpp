#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "morphtest/image.hpp"

namespace morphtest {

/// IDX3 unsigned-byte image container (magic 2051, big-endian header words).
/// Gzip-compressed files are inflated transparently, so the MNIST archives
/// can be used as distributed.
std::vector<GrayImage> load_idx_images(const std::filesystem::path& path);

/// IDX1 label container (magic 2049). Every label must be a digit 0-9.
std::vector<std::uint8_t> load_idx_labels(const std::filesystem::path& path);

void write_idx_images(const std::vector<GrayImage>& images, const std::filesystem::path& path);
void write_idx_labels(const std::vector<std::uint8_t>& labels, const std::filesystem::path& path);

}  // namespace morphtest
