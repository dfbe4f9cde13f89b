#include <doctest.h>

#include <fstream>

#include "helpers.hpp"
#include "morphtest/harness.hpp"
#include "morphtest/report.hpp"

using namespace morphtest;

namespace {

// Synthetic seed: a solid block whose position differs per digit, with one
// straight annotated segment on its outline.
SeedCase synthetic_seed(int digit) {
    SeedCase seed;
    seed.seed_id = "synth_" + std::to_string(digit);
    seed.label = digit;
    seed.image = GrayImage(28, 28, 0);
    const int ox = 4 + (digit % 5) * 2;
    const int oy = 4 + (digit / 5) * 3;
    for (int y = oy; y < oy + 12; ++y) {
        for (int x = ox; x < ox + 7; ++x) seed.image.at(x, y) = 255;
    }
    const auto contours = trace_contours(binarize(seed.image));
    seed.annotations = {{0, 0, 0, 7, 1}};
    seed.has_annotations = true;
    return seed;
}

SuiteConfig test_config() {
    SuiteConfig config;
    config.segment_counts.fill(1);  // synthetic seeds carry one segment each
    config.jobs = 2;
    return config;
}

class OffsetOracle : public Classifier {
  public:
    OffsetOracle(const GeneratedSuite& suite, int offset) : offset_(offset) {
        for (const TestCase& tc : suite.cases) truth_.push_back({tc.image, tc.expected_label});
    }
    Prediction predict(const GrayImage& img, std::string_view) override {
        for (const auto& [image, label] : truth_) {
            if (image == img) {
                Prediction p;
                p.label = (label + offset_) % 10;
                p.scores[static_cast<std::size_t>(p.label)] = 1.0;
                return p;
            }
        }
        Prediction p;
        p.label = 9;
        p.scores[9] = 1.0;
        return p;
    }
    bool thread_safe() const override { return true; }
    std::string name() const override { return offset_ == 0 ? "perfect-oracle" : "always-wrong"; }

  private:
    std::vector<std::pair<GrayImage, int>> truth_;
    int offset_;
};

}  // namespace

TEST_CASE("validate_seeds applies the metamorphic precondition") {
    std::vector<SeedCase> seeds;
    for (int d = 0; d < 10; ++d) seeds.push_back(synthetic_seed(d));

    // k-NN with the seeds themselves as reference accepts all ten.
    std::vector<GrayImage> refs;
    std::vector<std::uint8_t> labels;
    for (const auto& s : seeds) {
        refs.push_back(s.image);
        labels.push_back(static_cast<std::uint8_t>(s.label));
    }
    KnnClassifier knn(refs, labels, 1);
    CHECK(validate_seeds(seeds, knn).accepted.size() == 10);

    // Constant-7 answers accept only the seed labeled 7.
    FunctionClassifier seven("seven", [](const GrayImage&) {
        Prediction p;
        p.label = 7;
        p.scores[7] = 1.0;
        return p;
    });
    const SeedValidation validation = validate_seeds(seeds, seven);
    REQUIRE(validation.accepted.size() == 1);
    CHECK(validation.accepted[0].label == 7);
    CHECK(validation.rejected.size() == 9);

    // label+1 mod 10 rejects everything.
    std::vector<SeedCase> mini{seeds[0], seeds[1]};
    FunctionClassifier shift("shift", [&](const GrayImage& img) {
        Prediction p;
        p.label = (img == seeds[0].image) ? 1 : 2;
        p.scores[static_cast<std::size_t>(p.label)] = 1.0;
        return p;
    });
    CHECK_THROWS_WITH_AS(validate_seeds(mini, shift), doctest::Contains("NoValidSeeds"), Error);
}

TEST_CASE("image suite cardinality and determinism") {
    std::vector<SeedCase> seeds{synthetic_seed(3)};
    const SuiteConfig config = test_config();
    const GeneratedSuite a = generate_image_suite(seeds, config);
    CHECK(a.cases.size() == 729);
    CHECK(a.cases.front().case_id == "img-synth_3-0000");
    CHECK(a.cases.back().case_id == "img-synth_3-0728");
    CHECK(a.cases.front().expected_label == 3);

    const GeneratedSuite b = generate_image_suite(seeds, config);
    REQUIRE(a.cases.size() == b.cases.size());
    for (std::size_t i = 0; i < a.cases.size(); ++i) CHECK(a.cases[i].image == b.cases[i].image);

    SuiteConfig reseeded = config;
    reseeded.suite_seed = config.suite_seed + 1;
    const GeneratedSuite c = generate_image_suite(seeds, reseeded);
    bool any_differ = false;
    for (std::size_t i = 0; i < a.cases.size(); ++i) any_differ |= !(a.cases[i].image == c.cases[i].image);
    CHECK(any_differ);
}

TEST_CASE("suite generation does not depend on the worker count") {
    std::vector<SeedCase> seeds{synthetic_seed(1), synthetic_seed(2)};
    SuiteConfig serial = test_config();
    serial.jobs = 1;
    SuiteConfig parallel = test_config();
    parallel.jobs = 8;
    const GeneratedSuite a = generate_composite_suite(seeds, serial);
    const GeneratedSuite b = generate_composite_suite(seeds, parallel);
    REQUIRE(a.cases.size() == b.cases.size());
    for (std::size_t i = 0; i < a.cases.size(); ++i) {
        CHECK(a.cases[i].case_id == b.cases[i].case_id);
        CHECK(a.cases[i].image == b.cases[i].image);
    }
}

TEST_CASE("object suite honors annotations and flags the identity plan") {
    std::vector<SeedCase> seeds{synthetic_seed(6)};
    const SuiteConfig config = test_config();
    const GeneratedSuite suite = generate_object_suite(seeds, config);
    CHECK(suite.cases.size() == 9);  // one segment -> 9 plans
    int identity_count = 0;
    for (const TestCase& tc : suite.cases) {
        if (tc.identity_plan) {
            ++identity_count;
            CHECK(tc.provenance.find(";id") != std::string::npos);
        }
        CHECK(tc.suite == SuiteKind::Object);
        CHECK(tc.expected_label == 6);
    }
    CHECK(identity_count == 1);

    SeedCase bare = synthetic_seed(4);
    bare.has_annotations = false;
    bare.annotations.clear();
    CHECK_THROWS_WITH_AS(generate_object_suite({bare}, config), doctest::Contains("MissingAnnotations"), Error);
}

TEST_CASE("composite suite is the concatenation with disjoint ids") {
    std::vector<SeedCase> seeds{synthetic_seed(0), synthetic_seed(9)};
    const SuiteConfig config = test_config();
    const GeneratedSuite composite = generate_composite_suite(seeds, config);
    CHECK(composite.cases.size() == 2 * 729 + 2 * 9);
    CHECK(composite.kind == SuiteKind::Composite);
    std::set<std::string> ids;
    for (const TestCase& tc : composite.cases) ids.insert(tc.case_id);
    CHECK(ids.size() == composite.cases.size());
}

TEST_CASE("run_suite counts misrecognitions under the identity relation") {
    std::vector<SeedCase> seeds{synthetic_seed(2)};
    SuiteConfig config = test_config();
    const GeneratedSuite suite = generate_object_suite(seeds, config);

    OffsetOracle perfect(suite, 0);
    const RunResult good = run_suite(suite, perfect, 2);
    CHECK(good.report.produced == 9);
    CHECK(good.report.misrecognized == 0);
    CHECK(good.report.rate() == doctest::Approx(0.0));

    OffsetOracle wrong(suite, 1);
    const RunResult bad = run_suite(suite, wrong, 2);
    CHECK(bad.report.misrecognized == 9);
    CHECK(bad.report.rate() == doctest::Approx(1.0));
    CHECK(bad.verdicts.size() == 9);
    CHECK(bad.verdicts.front().case_id == suite.cases.front().case_id);
}

TEST_CASE("composite runs split sub-suite reports additively") {
    std::vector<SeedCase> seeds{synthetic_seed(5), synthetic_seed(8)};
    const SuiteConfig config = test_config();
    const GeneratedSuite composite = generate_composite_suite(seeds, config);

    OffsetOracle wrong(composite, 3);
    const RunResult run = run_suite(composite, wrong, 2);
    REQUIRE(run.image_part.has_value());
    REQUIRE(run.object_part.has_value());
    CHECK(run.image_part->produced == 2 * 729);
    CHECK(run.object_part->produced == 2 * 9);

    const AdditivityCheck check = composite_additivity(*run.image_part, *run.object_part, run.report);
    CHECK(check.sum_misrecognized == run.report.misrecognized);

    SuiteReport broken = run.report;
    broken.misrecognized -= 1;
    CHECK_THROWS_WITH_AS(composite_additivity(*run.image_part, *run.object_part, broken),
                         doctest::Contains("InconsistentReports"), Error);
}

TEST_CASE("composite additivity reproduces the published increase ratios") {
    SuiteReport image{"2hl", SuiteKind::Image, 7290, 1954, 2521.80, 0.0};
    SuiteReport object{"2hl", SuiteKind::Object, 3906, 1515, 570.66, 0.0};
    SuiteReport composite{"2hl", SuiteKind::Composite, 11196, 3469, 3092.46, 0.0};
    const AdditivityCheck check = composite_additivity(image, object, composite);
    CHECK(check.sum_misrecognized == 3469);
    CHECK(render_percent(check.increase_vs_image, true) == "+77.53%");

    // LeNet-5 row: 1556 + 1522 = 3078.
    SuiteReport image5{"lenet", SuiteKind::Image, 7290, 1556, 0.1, 0.0};
    SuiteReport object5{"lenet", SuiteKind::Object, 3906, 1522, 0.1, 0.0};
    SuiteReport composite5{"lenet", SuiteKind::Composite, 11196, 3078, 0.2, 0.0};
    const AdditivityCheck check5 = composite_additivity(image5, object5, composite5);
    CHECK(render_percent(check5.increase_vs_image, true) == "+97.81%");
}

TEST_CASE("extrapolation reproduces the published scale-up numbers") {
    ExtrapolationInputs inputs;
    inputs.image_seconds = 2521.80;
    inputs.image_count = 7290;
    inputs.object_seconds = 570.66;
    inputs.object_count = 3906;
    const Extrapolation ex = extrapolate_time(inputs, 50000);
    CHECK(ex.automated_hours == doctest::Approx(6.83).epsilon(0.01 / 6.83));
    CHECK(ex.manual_hours == doctest::Approx(146.20).epsilon(0.05 / 146.20));
    CHECK(ex.reduction * 100.0 == doctest::Approx(95.32).epsilon(0.05 / 95.32));

    ExtrapolationInputs bad = inputs;
    bad.image_seconds = 0.0;
    CHECK_THROWS_WITH_AS(extrapolate_time(bad, 50000), doctest::Contains("InconsistentReports"), Error);
}

TEST_CASE("percent rendering rounds half away from zero with two decimals") {
    CHECK(render_percent(1954.0 / 7290.0) == "26.80%");
    CHECK(render_percent(1515.0 / 1954.0, true) == "+77.53%");
    CHECK(render_percent(1522.0 / 1556.0, true) == "+97.81%");
    CHECK(render_percent(1514.0 / 1582.0, true) == "+95.70%");
    CHECK(render_percent(0.0) == "0.00%");
    CHECK(render_percent(1.0) == "100.00%");
    CHECK(render_fixed(2521.8, 2) == "2521.80");
    CHECK(render_fixed(-1.005, 2) == "-1.01");
}

TEST_CASE("manifest and report files round trip deterministically") {
    const auto dir = testutil::scratch_dir("manifest");
    std::vector<SeedCase> seeds{synthetic_seed(7)};
    const SuiteConfig config = test_config();
    const GeneratedSuite suite = generate_object_suite(seeds, config);
    write_suite_manifest(suite, config.suite_seed, dir / "suite");

    const GeneratedSuite loaded = read_suite_manifest(dir / "suite");
    CHECK(loaded.kind == suite.kind);
    REQUIRE(loaded.cases.size() == suite.cases.size());
    for (std::size_t i = 0; i < suite.cases.size(); ++i) {
        CHECK(loaded.cases[i].case_id == suite.cases[i].case_id);
        CHECK(loaded.cases[i].image == suite.cases[i].image);
        CHECK(loaded.cases[i].provenance == suite.cases[i].provenance);
        CHECK(loaded.cases[i].identity_plan == suite.cases[i].identity_plan);
        CHECK(loaded.cases[i].expected_label == suite.cases[i].expected_label);
    }

    OffsetOracle wrong(suite, 1);
    const RunResult run = run_suite(suite, wrong, 1);
    export_report(suite, run, dir / "report_a");
    export_report(suite, run, dir / "report_b");

    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    };
    CHECK(slurp(dir / "report_a" / "cases.csv") == slurp(dir / "report_b" / "cases.csv"));
    CHECK(slurp(dir / "report_a" / "summary.tsv") == slurp(dir / "report_b" / "summary.tsv"));

    const auto verdicts = read_cases_csv(dir / "report_a" / "cases.csv");
    REQUIRE(verdicts.size() == run.verdicts.size());
    std::int64_t recomputed = 0;
    for (const Verdict& v : verdicts) recomputed += v.misrecognized ? 1 : 0;
    CHECK(recomputed == run.report.misrecognized);

    // Misrecognized dumps: one PGM per bad case.
    std::size_t dumped = 0;
    for (const auto& entry : std::filesystem::directory_iterator(dir / "report_a" / "misrecognized")) {
        (void)entry;
        ++dumped;
    }
    CHECK(dumped == static_cast<std::size_t>(run.report.misrecognized));

    const auto summary = read_summary_tsv(dir / "report_a" / "summary.tsv");
    REQUIRE(summary.size() == 1);
    CHECK(summary[0].produced == 9);
    CHECK(summary[0].misrecognized == run.report.misrecognized);
}
