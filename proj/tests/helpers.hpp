#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>

#include "morphtest/image.hpp"

namespace testutil {

inline std::filesystem::path data_dir() {
    if (const char* env = std::getenv("MORPHTEST_DATA_DIR")) return env;
    return "data";
}

inline std::string cli_path() {
    if (const char* env = std::getenv("MORPHTEST_CLI")) return env;
    return "./build/tools/morphtest";
}

inline std::string stub_path() {
    if (const char* env = std::getenv("MORPHTEST_STUB")) return env;
    return "./build/tools/stub_sut";
}

/// Fresh scratch directory under the system temp root.
inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("morphtest_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

/// Deterministic pseudo-random test image.
inline morphtest::GrayImage random_image(int w, int h, std::uint64_t seed) {
    morphtest::GrayImage img(w, h);
    std::uint64_t state = seed * 0x9E3779B97F4A7C15ULL + 1;
    for (auto& px : img.data) {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        px = static_cast<std::uint8_t>(state & 0xFF);
    }
    return img;
}

}  // namespace testutil
