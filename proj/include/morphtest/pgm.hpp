#pragma once

#include <filesystem>

#include "morphtest/image.hpp"

namespace morphtest {

/// Binary PGM ("P5") with maxval 255. ASCII ("P2") and other formats are
/// rejected with UnsupportedFormat.
GrayImage read_pgm(const std::filesystem::path& path);

/// Writes "P5\n<w> <h>\n255\n" followed by the raw payload. The header
/// rendering is fixed so identical images produce identical files.
void write_pgm(const GrayImage& img, const std::filesystem::path& path);

}  // namespace morphtest
