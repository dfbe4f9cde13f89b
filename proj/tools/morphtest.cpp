#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>

#include "morphtest/harness.hpp"
#include "morphtest/idx.hpp"
#include "morphtest/parallel.hpp"
#include "morphtest/pgm.hpp"
#include "morphtest/report.hpp"

namespace fs = std::filesystem;
using namespace morphtest;

namespace {

// Exit codes: 0 ok, 1 error, 2 seed validation failure, 64 usage.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInvalidSeeds = 2;
constexpr int kExitUsage = 64;

struct SutOptions {
    std::string kind = "builtin-mlp";  // builtin-mlp | knn | external
    std::string weights_path;
    std::string command;
    int knn_k = 1;
    double timeout_seconds = 10.0;
};

void add_sut_flags(CLI::App* cmd, SutOptions& sut) {
    cmd->add_option("--sut", sut.kind, "classifier under test: builtin-mlp, knn, or external")
        ->check(CLI::IsMember({"builtin-mlp", "knn", "external"}));
    cmd->add_option("--weights", sut.weights_path, "weights file for --sut builtin-mlp");
    cmd->add_option("--sut-cmd", sut.command, "command line for --sut external");
    cmd->add_option("--knn-k", sut.knn_k, "neighbor count for --sut knn (default 1)");
    cmd->add_option("--sut-timeout", sut.timeout_seconds, "per-prediction timeout for external SUTs, seconds");
}

std::unique_ptr<Classifier> make_classifier(const SutOptions& sut, const std::vector<SeedCase>& seeds) {
    if (sut.kind == "builtin-mlp") {
        if (sut.weights_path.empty()) fail(Errc::IoFailure, "--sut builtin-mlp needs --weights");
        return std::make_unique<MlpClassifier>(load_weights(sut.weights_path));
    }
    if (sut.kind == "knn") {
        std::vector<GrayImage> refs;
        std::vector<std::uint8_t> labels;
        for (const SeedCase& seed : seeds) {
            refs.push_back(seed.image);
            labels.push_back(static_cast<std::uint8_t>(seed.label));
        }
        return std::make_unique<KnnClassifier>(std::move(refs), std::move(labels), sut.knn_k);
    }
    if (sut.command.empty()) fail(Errc::ProcessSpawnFailure, "--sut external needs --sut-cmd");
    return std::make_unique<ExternalClassifier>(sut.command, sut.timeout_seconds);
}

SuiteConfig build_config(const std::string& grid_path, const std::string& levels_text, std::uint64_t seed,
                         bool seed_given, int jobs, int supersample) {
    SuiteConfig config;
    if (!grid_path.empty()) {
        const GridFile gf = load_grid_file(grid_path);
        config.grid = gf.grid;
        if (gf.has_suite_seed && !seed_given) config.suite_seed = gf.suite_seed;
    }
    if (seed_given) config.suite_seed = seed;
    if (!levels_text.empty()) config.levels = parse_elongation_levels(levels_text);
    config.jobs = jobs;
    config.supersample = supersample;
    return config;
}

int report_seed_validation(const SeedValidation& validation) {
    for (const auto& r : validation.rejected) {
        std::cout << "seed " << r.seed_id << ": REJECTED (expected " << r.expected << ", SUT answered "
                  << r.predicted << ")\n";
    }
    for (const auto& s : validation.accepted) {
        std::cout << "seed " << s.seed_id << ": ok\n";
    }
    std::cout << validation.accepted.size() << " of " << validation.accepted.size() + validation.rejected.size()
              << " seeds accepted\n";
    return validation.rejected.empty() ? kExitOk : kExitInvalidSeeds;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metamorphic test suites for handwritten-digit classifiers"};
    app.require_subcommand(1);

    std::uint64_t seed = kDefaultSuiteSeed;
    int jobs = default_jobs();
    app.add_option("--seed", seed, "master seed for all randomness (fixed default, never wall-clock)");
    app.add_option("--jobs", jobs, "worker threads; results do not depend on this");

    // train
    auto* train = app.add_subcommand("train", "train the built-in 784-512-512-10 classifier");
    std::string mnist_images, mnist_labels, test_images, test_labels, weights_out;
    TrainConfig train_config;
    train->add_option("--mnist-images", mnist_images, "IDX training images (optionally .gz)")->required();
    train->add_option("--mnist-labels", mnist_labels, "IDX training labels")->required();
    train->add_option("--test-images", test_images, "IDX test images for the accuracy line");
    train->add_option("--test-labels", test_labels, "IDX test labels");
    train->add_option("--weights", weights_out, "output weights file")->required();
    train->add_option("--subset", train_config.subset, "train on the first N samples only");
    train->add_option("--epochs", train_config.epochs, "training epochs (default 5)");
    train->add_option("--lr", train_config.learning_rate, "SGD learning rate (default 0.01)");
    train->add_option("--batch", train_config.minibatch, "minibatch size (default 32)");

    // seeds validate
    auto* seeds_cmd = app.add_subcommand("seeds", "seed utilities");
    auto* seeds_validate = seeds_cmd->add_subcommand("validate", "check that the SUT accepts every seed");
    std::string sv_seeds_dir;
    SutOptions sv_sut;
    seeds_validate->add_option("--seeds", sv_seeds_dir, "directory of seed .pgm files")->required();
    add_sut_flags(seeds_validate, sv_sut);

    // generate
    auto* generate = app.add_subcommand("generate", "produce a test suite from the seeds");
    std::string gen_kind;
    std::string gen_seeds_dir, gen_annotations_dir, gen_grid, gen_levels, gen_out;
    int supersample = 4;
    generate->add_option("kind", gen_kind, "image, object, or composite")
        ->required()
        ->check(CLI::IsMember({"image", "object", "composite"}));
    generate->add_option("--seeds", gen_seeds_dir, "directory of seed .pgm files")->required();
    generate->add_option("--annotations", gen_annotations_dir, "directory of .seg annotation files");
    generate->add_option("--grid", gen_grid, "image operator grid file");
    generate->add_option("--levels", gen_levels, "elongation deltas, e.g. -2,0,2");
    generate->add_option("--out", gen_out, "output directory for manifest + images")->required();
    generate->add_option("--supersample", supersample, "rasterization supersampling factor (default 4)");

    // run
    auto* run = app.add_subcommand("run", "evaluate a SUT on a generated suite");
    std::string run_suite_dir, run_seeds_dir, run_out;
    bool no_validate = false;
    SutOptions run_sut;
    run->add_option("--suite", run_suite_dir, "directory written by generate")->required();
    run->add_option("--seeds", run_seeds_dir, "seed directory (for the seed-validation precondition)")
        ->required();
    run->add_option("--out", run_out, "report output directory")->required();
    run->add_flag("--no-validate", no_validate, "skip the seed-validation precondition");
    add_sut_flags(run, run_sut);

    // extrapolate
    auto* extrapolate = app.add_subcommand("extrapolate", "linear scale-up of generation time");
    ExtrapolationInputs ex_inputs;
    std::int64_t ex_target = 50000;
    std::vector<std::string> ex_from;
    extrapolate->add_option("--from", ex_from, "report directory (repeatable); reads image/object rows");
    extrapolate->add_option("--image-seconds", ex_inputs.image_seconds, "image suite generation seconds");
    extrapolate->add_option("--image-count", ex_inputs.image_count, "image suite size");
    extrapolate->add_option("--object-seconds", ex_inputs.object_seconds, "object suite generation seconds");
    extrapolate->add_option("--object-count", ex_inputs.object_count, "object suite size");
    extrapolate->add_option("--target", ex_target, "images to extrapolate to, per approach (default 50000)");
    extrapolate->add_option("--manual-images", ex_inputs.manual_images, "manual baseline: images produced");
    extrapolate->add_option("--manual-minutes", ex_inputs.manual_minutes, "manual baseline: minutes taken");

    // report
    auto* report = app.add_subcommand("report", "recompute and print summaries from saved reports");
    std::vector<std::string> rep_from;
    report->add_option("--from", rep_from, "report directory (repeatable)")->required();

    // annotate
    auto* annotate = app.add_subcommand("annotate", "authoring aid: suggest segment annotations for seeds");
    std::string ann_seeds_dir, ann_out;
    double ann_epsilon = 1.2;
    annotate->add_option("--seeds", ann_seeds_dir, "directory of seed .pgm files")->required();
    annotate->add_option("--out", ann_out, "directory for suggested .seg files")->required();
    annotate->add_option("--epsilon", ann_epsilon, "polyline simplification tolerance in pixels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (train->parsed()) {
            train_config.seed = seed;
            train_config.jobs = jobs;
            const auto images = load_idx_images(mnist_images);
            const auto labels = load_idx_labels(mnist_labels);
            std::cout << "training on " << (train_config.subset ? train_config.subset : images.size())
                      << " samples, " << train_config.epochs << " epochs\n";
            const MlpModel model = mlp_train(images, labels, train_config);
            save_weights(model, weights_out);
            std::cout << "weights written to " << weights_out << '\n';
            if (!test_images.empty() && !test_labels.empty()) {
                const auto timgs = load_idx_images(test_images);
                const auto tlabels = load_idx_labels(test_labels);
                const double acc = mlp_accuracy(model, timgs, tlabels, jobs);
                std::cout << "test accuracy: " << render_percent(acc) << " ("
                          << static_cast<long long>(std::llround(acc * static_cast<double>(timgs.size())))
                          << "/" << timgs.size() << ")\n";
            }
            return kExitOk;
        }

        if (seeds_validate->parsed()) {
            const auto seeds = load_seeds(sv_seeds_dir);
            const auto sut = make_classifier(sv_sut, seeds);
            const SeedValidation validation = validate_seeds(seeds, *sut);
            return report_seed_validation(validation);
        }

        if (generate->parsed()) {
            auto seeds = load_seeds(gen_seeds_dir);
            if (!gen_annotations_dir.empty()) attach_annotations(seeds, gen_annotations_dir);
            const SuiteConfig config =
                build_config(gen_grid, gen_levels, seed, app.count("--seed") > 0, jobs, supersample);
            GeneratedSuite suite;
            if (gen_kind == "image") suite = generate_image_suite(seeds, config);
            else if (gen_kind == "object") suite = generate_object_suite(seeds, config);
            else suite = generate_composite_suite(seeds, config);
            write_suite_manifest(suite, config.suite_seed, gen_out);
            std::cout << suite.cases.size() << " cases written to " << gen_out << " in "
                      << render_fixed(suite.generation_seconds, 2) << " s\n";
            return kExitOk;
        }

        if (run->parsed()) {
            const auto seeds = load_seeds(run_seeds_dir);
            const auto sut = make_classifier(run_sut, seeds);
            GeneratedSuite suite = read_suite_manifest(run_suite_dir);
            if (!no_validate) {
                const SeedValidation validation = validate_seeds(seeds, *sut);
                for (const auto& r : validation.rejected) {
                    std::cout << "seed " << r.seed_id << ": REJECTED (expected " << r.expected
                              << ", SUT answered " << r.predicted << ") - its cases are excluded\n";
                }
                if (!validation.rejected.empty()) {
                    std::vector<TestCase> kept;
                    for (TestCase& tc : suite.cases) {
                        const bool ok = std::any_of(validation.accepted.begin(), validation.accepted.end(),
                                                    [&](const SeedCase& s) { return s.seed_id == tc.seed_id; });
                        if (ok) kept.push_back(std::move(tc));
                    }
                    suite.cases = std::move(kept);
                }
            }
            const RunResult result = run_suite(suite, *sut, jobs);
            export_report(suite, result, run_out);
            std::cout << render_summary(result);
            std::cout << "report written to " << run_out << '\n';
            return kExitOk;
        }

        if (extrapolate->parsed()) {
            for (const std::string& dir : ex_from) {
                for (const SuiteReport& r : read_summary_tsv(fs::path(dir) / "summary.tsv")) {
                    if (r.kind == SuiteKind::Image && r.generation_seconds > 0) {
                        ex_inputs.image_seconds = r.generation_seconds;
                        ex_inputs.image_count = r.produced;
                    } else if (r.kind == SuiteKind::Object && r.generation_seconds > 0) {
                        ex_inputs.object_seconds = r.generation_seconds;
                        ex_inputs.object_count = r.produced;
                    }
                }
            }
            const Extrapolation ex = extrapolate_time(ex_inputs, ex_target);
            std::cout << "automated: " << 2 * ex_target << " images in " << render_fixed(ex.automated_hours, 2)
                      << " h\n";
            std::cout << "manual baseline: " << 2 * ex_target << " images in " << render_fixed(ex.manual_hours, 2)
                      << " h\n";
            std::cout << "reduction: " << render_percent(ex.reduction) << '\n';
            return kExitOk;
        }

        if (report->parsed()) {
            std::optional<SuiteReport> image_rep, object_rep, composite_rep;
            for (const std::string& dir : rep_from) {
                const auto verdicts = read_cases_csv(fs::path(dir) / "cases.csv");
                const auto stored = read_summary_tsv(fs::path(dir) / "summary.tsv");
                // Recompute the counts from the verdicts; the stored summary
                // must agree.
                std::int64_t mis = 0;
                for (const Verdict& v : verdicts) mis += v.misrecognized ? 1 : 0;
                const SuiteReport* total = nullptr;
                for (const SuiteReport& r : stored) {
                    if (!total || r.kind == SuiteKind::Composite) total = &r;
                }
                if (total == nullptr) fail(Errc::InconsistentReports, "no summary rows in " + dir);
                if (total->produced != static_cast<std::int64_t>(verdicts.size()) || total->misrecognized != mis) {
                    fail(Errc::InconsistentReports,
                         dir + ": summary says " + std::to_string(total->misrecognized) + "/" +
                             std::to_string(total->produced) + ", cases.csv has " + std::to_string(mis) + "/" +
                             std::to_string(verdicts.size()));
                }
                std::cout << dir << ": " << suite_kind_name(total->kind) << " suite, " << total->misrecognized
                          << "/" << total->produced << " misrecognized, rate "
                          << render_percent(static_cast<double>(mis) / static_cast<double>(verdicts.size()))
                          << '\n';
                for (const SuiteReport& r : stored) {
                    if (r.kind == SuiteKind::Image) image_rep = r;
                    if (r.kind == SuiteKind::Object) object_rep = r;
                    if (r.kind == SuiteKind::Composite) composite_rep = r;
                }
            }
            if (image_rep && object_rep && composite_rep) {
                const AdditivityCheck check = composite_additivity(*image_rep, *object_rep, *composite_rep);
                std::cout << "composite additivity: ok (" << image_rep->misrecognized << " + "
                          << object_rep->misrecognized << " = " << check.sum_misrecognized << "), increase "
                          << render_percent(check.increase_vs_image, true) << '\n';
            }
            return kExitOk;
        }

        if (annotate->parsed()) {
            const auto seeds = load_seeds(ann_seeds_dir);
            fs::create_directories(ann_out);
            const SuiteConfig defaults;
            for (const SeedCase& seed : seeds) {
                const auto contours = trace_contours(binarize(seed.image, defaults.binarize_threshold));
                if (contours.empty()) {
                    std::cout << seed.seed_id << ": no contours, skipped\n";
                    continue;
                }
                // Suggest on the longest outer contour.
                int best = -1;
                for (std::size_t i = 0; i < contours.size(); ++i) {
                    if (contours[i].kind != ContourKind::Outer) continue;
                    if (best < 0 || contours[i].points.size() > contours[static_cast<std::size_t>(best)].points.size()) {
                        best = static_cast<int>(i);
                    }
                }
                const int want = defaults.segment_counts[static_cast<std::size_t>(seed.label)];
                auto segs = suggest_segments(contours[static_cast<std::size_t>(best)], ann_epsilon, want);
                for (auto& s : segs) s.contour_index = best;
                save_annotations(segs, fs::path(ann_out) / (seed.seed_id + ".seg"));
                std::cout << seed.seed_id << ": " << segs.size() << " segments suggested\n";
            }
            std::cout << "review the suggestions before using them\n";
            return kExitOk;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == Errc::NoValidSeeds ? kExitInvalidSeeds : kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitOk;
}
