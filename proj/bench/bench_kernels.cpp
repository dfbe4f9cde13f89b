// Times the OpenMP paths against the serial reference implementations on a
// synthetic glyph. Build and run:
//   cmake --build build --target morphtest_bench && ./build/bench/morphtest_bench

#include <chrono>
#include <cstdio>
#include <numeric>
#include <vector>

#include "morphtest/harness.hpp"
#include "morphtest/parallel.hpp"
#include "morphtest/reference.hpp"

using namespace morphtest;

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& fn) {
    const auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Thick ring with a bar, roughly digit-like.
GrayImage synthetic_glyph() {
    GrayImage img(28, 28, 0);
    const double cx = 13.5, cy = 13.5;
    for (int y = 0; y < 28; ++y) {
        for (int x = 0; x < 28; ++x) {
            const double r = std::hypot(x - cx, y - cy);
            if (r > 6.0 && r < 9.5) img.at(x, y) = 255;
            if (x >= 12 && x <= 15 && y >= 4 && y <= 10) img.at(x, y) = 255;
        }
    }
    return img;
}

void row(const char* name, double serial_ms, double fast_ms) {
    std::printf("%-32s %10.1f ms %10.1f ms %8.2fx\n", name, serial_ms, fast_ms,
                serial_ms / (fast_ms > 0 ? fast_ms : 1e-9));
}

}  // namespace

int main() {
    const int jobs = default_jobs();
    std::printf("workers: %d\n", jobs);
    std::printf("%-32s %13s %13s %9s\n", "kernel", "reference", "production", "speedup");

    const GrayImage glyph = synthetic_glyph();

    {
        constexpr int reps = 2000;
        GrayImage sink;
        const double dense = time_ms([&] {
            for (int i = 0; i < reps; ++i) sink = ref::gaussian_blur_dense(glyph, true, 1.5);
        });
        const double separable = time_ms([&] {
            for (int i = 0; i < reps; ++i) sink = gaussian_blur_1d(glyph, OperatorFamily::BlurX, 1.5);
        });
        row("gaussian blur (2000 images)", dense, separable);
    }

    {
        const auto contours = trace_contours(binarize(glyph));
        constexpr int reps = 200;
        GrayImage sink;
        const double pointwise = time_ms([&] {
            for (int i = 0; i < reps; ++i) sink = ref::rasterize_pointwise(contours, 28, 28, 4);
        });
        const double scanline = time_ms([&] {
            for (int i = 0; i < reps; ++i) sink = rasterize(contours, 28, 28, 4);
        });
        row("rasterize x4 (200 images)", pointwise, scanline);
    }

    {
        std::vector<SeedCase> seeds;
        for (int d = 0; d < 10; ++d) {
            SeedCase s;
            s.seed_id = "bench_" + std::to_string(d);
            s.label = d;
            s.image = glyph;
            seeds.push_back(std::move(s));
        }
        SuiteConfig config;
        config.jobs = 1;
        double serial_ms = 0.0;
        serial_ms = time_ms([&] { (void)generate_image_suite(seeds, config); });
        config.jobs = jobs;
        const double parallel_ms = time_ms([&] { (void)generate_image_suite(seeds, config); });
        row("image suite (7290 cases)", serial_ms, parallel_ms);
    }

    {
        MlpModel model = make_mlp<float>(kDigitMlpSizes);
        he_init(model, 7);
        constexpr int n = 2000;
        std::vector<float> input = image_to_input(glyph);
        std::vector<float> out(512);
        const double matvec = time_ms([&] {
            for (int i = 0; i < n; ++i) {
                ref::matvec_serial(model.layers[0].w.data(), model.layers[0].b.data(), input.data(), out.data(),
                                   512, 784);
            }
        });
        std::vector<GrayImage> batch(n, glyph);
        std::vector<std::uint8_t> labels(n, 0);
        const double serial_infer = time_ms([&] { (void)mlp_accuracy(model, batch, labels, 1); });
        const double parallel_infer = time_ms([&] { (void)mlp_accuracy(model, batch, labels, jobs); });
        std::printf("%-32s %10.1f ms (first-layer matvec only)\n", "matvec baseline (2000x)", matvec);
        row("mlp inference (2000 images)", serial_infer, parallel_infer);
    }

    return 0;
}
