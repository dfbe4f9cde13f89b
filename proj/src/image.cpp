#include "morphtest/image.hpp"

#include <cmath>

namespace morphtest {

std::int64_t total_intensity(const GrayImage& img) {
    std::int64_t sum = 0;
    for (std::uint8_t v : img.data) sum += v;
    return sum;
}

Centroid center_of_mass(const GrayImage& img) {
    std::int64_t mass = 0;
    std::int64_t mx = 0;
    std::int64_t my = 0;
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const std::int64_t v = img.at(x, y);
            mass += v;
            mx += v * x;
            my += v * y;
        }
    }
    if (mass == 0) fail(Errc::AllBlackImage, "center of mass of an all-black image");
    return {static_cast<double>(mx) / static_cast<double>(mass),
            static_cast<double>(my) / static_cast<double>(mass)};
}

GrayImage translate(const GrayImage& img, int dx, int dy) {
    GrayImage out(img.width, img.height, 0);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const int sx = x - dx;
            const int sy = y - dy;
            if (img.in_bounds(sx, sy)) out.at(x, y) = img.at(sx, sy);
        }
    }
    return out;
}

namespace {

int round_half_away(double v) {
    return static_cast<int>(v >= 0.0 ? std::floor(v + 0.5) : std::ceil(v - 0.5));
}

// An offset of exactly +-0.5 would oscillate between two pixels under
// half-away rounding; treating it as centered keeps the fixpoint property.
int centering_offset(double target, double centroid) {
    const double delta = target - centroid;
    if (std::abs(delta) <= 0.5) return 0;
    return round_half_away(delta);
}

}  // namespace

GrayImage center_digit(const GrayImage& img) {
    const Centroid c = center_of_mass(img);
    const double gx = (img.width - 1) / 2.0;
    const double gy = (img.height - 1) / 2.0;
    const int dx = centering_offset(gx, c.x);
    const int dy = centering_offset(gy, c.y);
    if (dx == 0 && dy == 0) return img;
    return translate(img, dx, dy);
}

BinaryImage binarize(const GrayImage& img, int threshold) {
    BinaryImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) out.mask[i] = img.data[i] >= threshold ? 1 : 0;
    return out;
}

std::string ascii_art(const GrayImage& img) {
    static const char ramp[] = " .:-=+*#%@";
    std::string s;
    s.reserve(static_cast<std::size_t>((img.width + 1)) * img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) s.push_back(ramp[img.at(x, y) * 10 / 256]);
        s.push_back('\n');
    }
    return s;
}

}  // namespace morphtest
