#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "morphtest/image.hpp"
#include "morphtest/imagemorph.hpp"
#include "morphtest/objectmorph.hpp"
#include "morphtest/sut.hpp"

namespace morphtest {

/// Suite seed used when the caller does not pick one. Fixed so runs never
/// depend on the wall clock.
inline constexpr std::uint64_t kDefaultSuiteSeed = 1729;

/// A seed glyph: the original image whose label every follow-up case
/// inherits (the identity metamorphic relation).
struct SeedCase {
    std::string seed_id;
    int label = 0;
    GrayImage image;
    std::vector<SegmentAnnotation> annotations;
    bool has_annotations = false;
};

/// Loads every *.pgm in the directory (sorted by filename). The character
/// before the extension must be the digit label, e.g. digit_7.pgm.
std::vector<SeedCase> load_seeds(const std::filesystem::path& seeds_dir);

/// Attaches <stem>.seg files from the annotations directory where present.
void attach_annotations(std::vector<SeedCase>& seeds, const std::filesystem::path& annotations_dir);

/// Everything that parameterizes suite generation. segment_counts pins the
/// expected number of annotated segments per digit.
struct SuiteConfig {
    LevelGrid grid;
    ElongationLevels levels;
    std::uint64_t suite_seed = kDefaultSuiteSeed;
    int supersample = 4;
    int binarize_threshold = 128;
    std::array<int, 10> segment_counts{2, 3, 2, 3, 3, 3, 1, 3, 2, 1};
    int jobs = 1;
};

enum class SuiteKind { Image, Object, Composite };
const char* suite_kind_name(SuiteKind kind);

struct TestCase {
    std::string case_id;
    std::string seed_id;
    SuiteKind suite = SuiteKind::Image;
    std::string provenance;
    bool identity_plan = false;
    int expected_label = 0;
    GrayImage image;
};

struct GeneratedSuite {
    SuiteKind kind = SuiteKind::Image;
    std::vector<TestCase> cases;
    double generation_seconds = 0.0;
};

/// seeds x 729 transform plans, cases ordered by (seed, plan rank).
GeneratedSuite generate_image_suite(const std::vector<SeedCase>& seeds, const SuiteConfig& config);

/// 9^segments elongation plans per seed, identity plan included. Throws
/// MissingAnnotations for seeds without annotations.
GeneratedSuite generate_object_suite(const std::vector<SeedCase>& seeds, const SuiteConfig& config);

/// Image suite followed by object suite; case id namespaces stay disjoint.
GeneratedSuite generate_composite_suite(const std::vector<SeedCase>& seeds, const SuiteConfig& config);

/// Seed acceptance filter: a seed enters metamorphic testing only if the SUT
/// classifies it correctly. Throws NoValidSeeds when every seed fails.
struct SeedValidation {
    struct Rejection {
        std::string seed_id;
        int expected = 0;
        int predicted = 0;
    };
    std::vector<SeedCase> accepted;
    std::vector<Rejection> rejected;
};
SeedValidation validate_seeds(const std::vector<SeedCase>& seeds, Classifier& sut);

struct Verdict {
    std::string case_id;
    std::string seed_id;
    SuiteKind suite = SuiteKind::Image;
    std::string provenance;
    int expected = 0;
    int predicted = 0;
    bool misrecognized = false;
};

struct SuiteReport {
    std::string sut_name;
    SuiteKind kind = SuiteKind::Image;
    std::int64_t produced = 0;
    std::int64_t misrecognized = 0;
    double generation_seconds = 0.0;
    double evaluation_seconds = 0.0;

    double rate() const { return produced > 0 ? static_cast<double>(misrecognized) / produced : 0.0; }
};

struct RunResult {
    SuiteReport report;
    std::optional<SuiteReport> image_part;  // populated for composite runs
    std::optional<SuiteReport> object_part;
    std::vector<Verdict> verdicts;  // ordered by case_id
};

/// Evaluates every case; a case is misrecognized iff predicted != expected.
/// Thread-safe classifiers fan out across jobs workers; outputs are
/// independent of the worker count.
RunResult run_suite(const GeneratedSuite& suite, Classifier& sut, int jobs);

/// Cross-checks the three reports of one SUT: composite counts must equal
/// the sum of the sub-suites. Returns the paper-style increase (object
/// misrecognitions relative to image misrecognitions). Throws
/// InconsistentReports on mismatch.
struct AdditivityCheck {
    std::int64_t sum_misrecognized = 0;
    double increase_vs_image = 0.0;
};
AdditivityCheck composite_additivity(const SuiteReport& image, const SuiteReport& object,
                                     const SuiteReport& composite);

/// Linear-rate extrapolation to large suites, with the manual-production
/// baseline for comparison.
struct ExtrapolationInputs {
    double image_seconds = 0.0;
    std::int64_t image_count = 0;
    double object_seconds = 0.0;
    std::int64_t object_count = 0;
    std::int64_t manual_images = 456;
    double manual_minutes = 40.0;
};
struct Extrapolation {
    double automated_hours = 0.0;
    double manual_hours = 0.0;
    double reduction = 0.0;  // 1 - automated/manual
};
Extrapolation extrapolate_time(const ExtrapolationInputs& inputs, std::int64_t target_images_per_approach);

}  // namespace morphtest
