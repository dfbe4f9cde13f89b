#include "morphtest/imagemorph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "morphtest/rng.hpp"

namespace morphtest {

const char* family_name(OperatorFamily f) {
    switch (f) {
        case OperatorFamily::BlurX: return "blur_x";
        case OperatorFamily::BlurY: return "blur_y";
        case OperatorFamily::Noise: return "noise";
        case OperatorFamily::Shear: return "shear";
        case OperatorFamily::Rotate: return "rotate";
        case OperatorFamily::Erode: return "erode";
    }
    return "?";
}

void LevelGrid::validate() const {
    auto check_finite = [](const std::array<double, 3>& a, const char* name) {
        for (double v : a) {
            if (!std::isfinite(v)) fail(Errc::MalformedGrid, std::string(name) + " level not finite");
        }
    };
    check_finite(blur_x, "blur_x");
    check_finite(blur_y, "blur_y");
    check_finite(noise, "noise");
    check_finite(shear, "shear");
    check_finite(rotate, "rotate");
    for (double v : blur_x)
        if (v <= 0) fail(Errc::MalformedGrid, "blur_x sigma must be positive");
    for (double v : blur_y)
        if (v <= 0) fail(Errc::MalformedGrid, "blur_y sigma must be positive");
    for (double v : noise)
        if (v < 0) fail(Errc::MalformedGrid, "noise sigma must be non-negative");
    for (int v : erode)
        if (v < 1) fail(Errc::MalformedGrid, "erode iterations must be >= 1");
}

GridFile load_grid_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(Errc::IoFailure, "cannot open " + path.string());
    GridFile out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        const std::string where = path.string() + ":" + std::to_string(lineno);
        if (key == "suite_seed") {
            if (!(ls >> out.suite_seed)) fail(Errc::MalformedGrid, "suite_seed needs one integer at " + where);
            out.has_suite_seed = true;
        } else if (key == "erode") {
            for (int& v : out.grid.erode) {
                if (!(ls >> v)) fail(Errc::MalformedGrid, "erode needs three integers at " + where);
            }
        } else {
            std::array<double, 3>* target = nullptr;
            if (key == "blur_x") target = &out.grid.blur_x;
            else if (key == "blur_y") target = &out.grid.blur_y;
            else if (key == "noise") target = &out.grid.noise;
            else if (key == "shear") target = &out.grid.shear;
            else if (key == "rotate") target = &out.grid.rotate;
            if (target == nullptr) fail(Errc::MalformedGrid, "unknown key '" + key + "' at " + where);
            for (double& v : *target) {
                if (!(ls >> v)) fail(Errc::MalformedGrid, key + " needs three numbers at " + where);
            }
        }
        std::string extra;
        if (ls >> extra) fail(Errc::MalformedGrid, "trailing token '" + extra + "' at " + where);
    }
    out.grid.validate();
    return out;
}

void save_grid_file(const LevelGrid& grid, std::uint64_t suite_seed, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(Errc::IoFailure, "cannot open " + path.string() + " for writing");
    auto line = [&out](const char* key, const std::array<double, 3>& v) {
        out << key << ' ' << v[0] << ' ' << v[1] << ' ' << v[2] << '\n';
    };
    out << "# image operator levels: three values per family\n";
    line("blur_x", grid.blur_x);
    line("blur_y", grid.blur_y);
    line("noise", grid.noise);
    line("shear", grid.shear);
    line("rotate", grid.rotate);
    out << "erode " << grid.erode[0] << ' ' << grid.erode[1] << ' ' << grid.erode[2] << '\n';
    out << "suite_seed " << suite_seed << '\n';
}

namespace {

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> k(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double v = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
        k[i + radius] = v;
        sum += v;
    }
    for (double& v : k) v /= sum;
    return k;
}

// Half-sample symmetric reflection: -1 -> 0, n -> n-1.
int reflect(int i, int n) {
    while (i < 0 || i >= n) {
        if (i < 0) i = -i - 1;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

std::uint8_t to_intensity(double v) {
    const long r = std::lround(v);
    return static_cast<std::uint8_t>(std::clamp(r, 0L, 255L));
}

// Bilinear read with zero outside the frame.
double sample_bilinear(const GrayImage& img, double sx, double sy) {
    const int x0 = static_cast<int>(std::floor(sx));
    const int y0 = static_cast<int>(std::floor(sy));
    const double fx = sx - x0;
    const double fy = sy - y0;
    auto px = [&img](int x, int y) -> double {
        return img.in_bounds(x, y) ? static_cast<double>(img.at(x, y)) : 0.0;
    };
    return px(x0, y0) * (1 - fx) * (1 - fy) + px(x0 + 1, y0) * fx * (1 - fy) +
           px(x0, y0 + 1) * (1 - fx) * fy + px(x0 + 1, y0 + 1) * fx * fy;
}

}  // namespace

GrayImage gaussian_blur_1d(const GrayImage& img, OperatorFamily axis, double sigma) {
    if (sigma <= 0.0) fail(Errc::NonPositiveSigma, "blur sigma must be positive");
    const std::vector<double> kernel = gaussian_kernel(sigma);
    const int radius = static_cast<int>(kernel.size() / 2);
    GrayImage out(img.width, img.height);
    if (axis == OperatorFamily::BlurX) {
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i) {
                    acc += kernel[i + radius] * img.at(reflect(x + i, img.width), y);
                }
                out.at(x, y) = to_intensity(acc);
            }
        }
    } else if (axis == OperatorFamily::BlurY) {
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                double acc = 0.0;
                for (int i = -radius; i <= radius; ++i) {
                    acc += kernel[i + radius] * img.at(x, reflect(y + i, img.height));
                }
                out.at(x, y) = to_intensity(acc);
            }
        }
    } else {
        fail(Errc::WrongImageSize, "gaussian_blur_1d axis must be BlurX or BlurY");
    }
    return out;
}

GrayImage add_gaussian_noise(const GrayImage& img, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) fail(Errc::NonPositiveSigma, "noise sigma must be non-negative");
    if (sigma == 0.0) return img;
    GaussianSampler gauss(seed);
    GrayImage out(img.width, img.height);
    for (std::size_t i = 0; i < img.data.size(); ++i) {
        const double noisy = static_cast<double>(img.data[i]) + sigma * gauss.next();
        out.data[i] = to_intensity(noisy);
    }
    return out;
}

GrayImage shear_horizontal(const GrayImage& img, double factor) {
    if (factor == 0.0) return img;
    const double cy = (img.height - 1) / 2.0;
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        const double shift = factor * (y - cy);
        for (int x = 0; x < img.width; ++x) {
            out.at(x, y) = to_intensity(sample_bilinear(img, x - shift, y));
        }
    }
    return out;
}

GrayImage rotate(const GrayImage& img, double degrees) {
    if (degrees == 0.0) return img;
    const double rad = degrees * std::numbers::pi / 180.0;
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    const double cx = (img.width - 1) / 2.0;
    const double cy = (img.height - 1) / 2.0;
    GrayImage out(img.width, img.height);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            const double sx = cx + c * (x - cx) + s * (y - cy);
            const double sy = cy - s * (x - cx) + c * (y - cy);
            out.at(x, y) = to_intensity(sample_bilinear(img, sx, sy));
        }
    }
    return out;
}

GrayImage erode(const GrayImage& img, int iterations) {
    if (iterations < 1) fail(Errc::MalformedGrid, "erode iterations must be >= 1");
    GrayImage cur = img;
    GrayImage next(img.width, img.height);
    auto px = [](const GrayImage& im, int x, int y) -> int {
        return im.in_bounds(x, y) ? im.at(x, y) : 255;
    };
    for (int it = 0; it < iterations; ++it) {
        for (int y = 0; y < cur.height; ++y) {
            for (int x = 0; x < cur.width; ++x) {
                int m = cur.at(x, y);
                m = std::min(m, px(cur, x - 1, y));
                m = std::min(m, px(cur, x + 1, y));
                m = std::min(m, px(cur, x, y - 1));
                m = std::min(m, px(cur, x, y + 1));
                next.at(x, y) = static_cast<std::uint8_t>(m);
            }
        }
        std::swap(cur, next);
    }
    return cur;
}

GrayImage apply_plan(const GrayImage& img, const LevelGrid& grid, const TransformPlan& plan) {
    for (int idx : plan.level) {
        if (idx < 0 || idx >= kLevelsPerFamily) fail(Errc::MalformedGrid, "plan level index out of range");
    }
    GrayImage out = gaussian_blur_1d(img, OperatorFamily::BlurX, grid.blur_x[plan.level[0]]);
    out = gaussian_blur_1d(out, OperatorFamily::BlurY, grid.blur_y[plan.level[1]]);
    out = add_gaussian_noise(out, grid.noise[plan.level[2]], plan.case_seed);
    out = shear_horizontal(out, grid.shear[plan.level[3]]);
    out = rotate(out, grid.rotate[plan.level[4]]);
    out = erode(out, grid.erode[plan.level[5]]);
    return out;
}

std::vector<TransformPlan> enumerate_plans(const LevelGrid& grid, std::uint64_t suite_seed) {
    grid.validate();
    std::vector<TransformPlan> plans;
    plans.reserve(729);
    std::uint64_t rank = 0;
    TransformPlan plan;
    for (plan.level[0] = 0; plan.level[0] < 3; ++plan.level[0])
        for (plan.level[1] = 0; plan.level[1] < 3; ++plan.level[1])
            for (plan.level[2] = 0; plan.level[2] < 3; ++plan.level[2])
                for (plan.level[3] = 0; plan.level[3] < 3; ++plan.level[3])
                    for (plan.level[4] = 0; plan.level[4] < 3; ++plan.level[4])
                        for (plan.level[5] = 0; plan.level[5] < 3; ++plan.level[5]) {
                            plan.case_seed = derive_seed(suite_seed, rank);
                            plans.push_back(plan);
                            ++rank;
                        }
    return plans;
}

}  // namespace morphtest
