#include "morphtest/harness.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "morphtest/parallel.hpp"
#include "morphtest/pgm.hpp"

namespace morphtest {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string zero_padded(std::size_t value, int width) {
    std::string s = std::to_string(value);
    while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
    return s;
}

std::string sanitize_id(std::string s) {
    for (char& c : s) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') c = '_';
    }
    return s;
}

std::string image_provenance(const TransformPlan& plan) {
    std::string s = "i:";
    for (int idx : plan.level) s.push_back(static_cast<char>('0' + idx));
    return s;
}

std::string object_provenance(const ObjectPlan& plan, bool identity) {
    std::string s = "o:";
    for (std::size_t i = 0; i < plan.level.size(); ++i) {
        if (i > 0) s.push_back('.');
        s.push_back(static_cast<char>('0' + plan.level[i][0]));
        s.push_back(static_cast<char>('0' + plan.level[i][1]));
    }
    if (identity) s += ";id";
    return s;
}

}  // namespace

const char* suite_kind_name(SuiteKind kind) {
    switch (kind) {
        case SuiteKind::Image: return "image";
        case SuiteKind::Object: return "object";
        case SuiteKind::Composite: return "composite";
    }
    return "?";
}

std::vector<SeedCase> load_seeds(const std::filesystem::path& seeds_dir) {
    if (!std::filesystem::is_directory(seeds_dir)) {
        fail(Errc::IoFailure, "seed directory not found: " + seeds_dir.string());
    }
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(seeds_dir)) {
        if (entry.path().extension() == ".pgm") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) fail(Errc::IoFailure, "no .pgm seeds in " + seeds_dir.string());

    std::vector<SeedCase> seeds;
    for (const auto& file : files) {
        const std::string stem = file.stem().string();
        if (stem.empty() || !std::isdigit(static_cast<unsigned char>(stem.back()))) {
            fail(Errc::IoFailure, "seed file name must end with its digit label: " + file.string());
        }
        SeedCase seed;
        seed.seed_id = sanitize_id(stem);
        seed.label = stem.back() - '0';
        seed.image = read_pgm(file);
        seeds.push_back(std::move(seed));
    }
    return seeds;
}

void attach_annotations(std::vector<SeedCase>& seeds, const std::filesystem::path& annotations_dir) {
    for (SeedCase& seed : seeds) {
        const std::filesystem::path file = annotations_dir / (seed.seed_id + ".seg");
        if (std::filesystem::exists(file)) {
            seed.annotations = load_annotations(file);
            seed.has_annotations = true;
        }
    }
}

GeneratedSuite generate_image_suite(const std::vector<SeedCase>& seeds, const SuiteConfig& config) {
    const auto start = Clock::now();
    const std::vector<TransformPlan> plans = enumerate_plans(config.grid, config.suite_seed);

    GeneratedSuite suite;
    suite.kind = SuiteKind::Image;
    suite.cases.resize(seeds.size() * plans.size());
    parallel_for(static_cast<std::int64_t>(suite.cases.size()), config.jobs, [&](std::int64_t idx) {
        const std::size_t seed_index = static_cast<std::size_t>(idx) / plans.size();
        const std::size_t rank = static_cast<std::size_t>(idx) % plans.size();
        const SeedCase& seed = seeds[seed_index];
        TestCase& tc = suite.cases[static_cast<std::size_t>(idx)];
        tc.case_id = "img-" + seed.seed_id + "-" + zero_padded(rank, 4);
        tc.seed_id = seed.seed_id;
        tc.suite = SuiteKind::Image;
        tc.provenance = image_provenance(plans[rank]);
        tc.expected_label = seed.label;
        tc.image = apply_plan(seed.image, config.grid, plans[rank]);
    });
    suite.generation_seconds = seconds_since(start);
    return suite;
}

GeneratedSuite generate_object_suite(const std::vector<SeedCase>& seeds, const SuiteConfig& config) {
    const auto start = Clock::now();
    config.levels.validate();

    struct PreparedSeed {
        SeedObject object;
        std::vector<ObjectPlan> plans;
        std::size_t first_case = 0;
    };
    std::vector<PreparedSeed> prepared;
    std::size_t total_cases = 0;
    for (const SeedCase& seed : seeds) {
        if (!seed.has_annotations) {
            fail(Errc::MissingAnnotations, "seed '" + seed.seed_id + "' has no segment annotations");
        }
        PreparedSeed p;
        const int expected = (seed.label >= 0 && seed.label <= 9)
                                 ? config.segment_counts[static_cast<std::size_t>(seed.label)]
                                 : -1;
        p.object = make_seed_object(seed.label, seed.image, seed.annotations, config.binarize_threshold, expected);
        p.plans = enumerate_object_plans(p.object, config.levels);
        p.first_case = total_cases;
        total_cases += p.plans.size();
        prepared.push_back(std::move(p));
    }

    GeneratedSuite suite;
    suite.kind = SuiteKind::Object;
    suite.cases.resize(total_cases);
    for (std::size_t s = 0; s < prepared.size(); ++s) {
        const PreparedSeed& p = prepared[s];
        const SeedCase& seed = seeds[s];
        parallel_for(static_cast<std::int64_t>(p.plans.size()), config.jobs, [&](std::int64_t rank) {
            const ObjectPlan& plan = p.plans[static_cast<std::size_t>(rank)];
            TestCase& tc = suite.cases[p.first_case + static_cast<std::size_t>(rank)];
            tc.case_id = "obj-" + seed.seed_id + "-" + zero_padded(static_cast<std::size_t>(rank), 4);
            tc.seed_id = seed.seed_id;
            tc.suite = SuiteKind::Object;
            tc.identity_plan = plan.is_identity(config.levels);
            tc.provenance = object_provenance(plan, tc.identity_plan);
            tc.expected_label = seed.label;
            tc.image = generate_object_image(p.object, plan, config.levels, config.supersample);
        });
    }
    suite.generation_seconds = seconds_since(start);
    return suite;
}

GeneratedSuite generate_composite_suite(const std::vector<SeedCase>& seeds, const SuiteConfig& config) {
    GeneratedSuite image = generate_image_suite(seeds, config);
    GeneratedSuite object = generate_object_suite(seeds, config);
    GeneratedSuite composite;
    composite.kind = SuiteKind::Composite;
    composite.cases = std::move(image.cases);
    composite.cases.insert(composite.cases.end(), std::make_move_iterator(object.cases.begin()),
                           std::make_move_iterator(object.cases.end()));
    composite.generation_seconds = image.generation_seconds + object.generation_seconds;
    return composite;
}

SeedValidation validate_seeds(const std::vector<SeedCase>& seeds, Classifier& sut) {
    SeedValidation out;
    for (const SeedCase& seed : seeds) {
        const Prediction pred = sut.predict(seed.image, "seed-" + seed.seed_id);
        if (pred.label == seed.label) {
            out.accepted.push_back(seed);
        } else {
            out.rejected.push_back({seed.seed_id, seed.label, pred.label});
        }
    }
    if (out.accepted.empty()) {
        fail(Errc::NoValidSeeds, "the SUT misclassifies every seed; metamorphic testing needs a correct seed");
    }
    return out;
}

RunResult run_suite(const GeneratedSuite& suite, Classifier& sut, int jobs) {
    const auto start = Clock::now();
    RunResult result;
    result.verdicts.resize(suite.cases.size());
    const int effective_jobs = sut.thread_safe() ? jobs : 1;
    parallel_for(static_cast<std::int64_t>(suite.cases.size()), effective_jobs, [&](std::int64_t i) {
        const TestCase& tc = suite.cases[static_cast<std::size_t>(i)];
        const Prediction pred = sut.predict(tc.image, tc.case_id);
        Verdict& v = result.verdicts[static_cast<std::size_t>(i)];
        v.case_id = tc.case_id;
        v.seed_id = tc.seed_id;
        v.suite = tc.suite;
        v.provenance = tc.provenance;
        v.expected = tc.expected_label;
        v.predicted = pred.label;
        v.misrecognized = pred.label != tc.expected_label;
    });
    const double eval_seconds = seconds_since(start);

    result.report.sut_name = sut.name();
    result.report.kind = suite.kind;
    result.report.produced = static_cast<std::int64_t>(suite.cases.size());
    result.report.generation_seconds = suite.generation_seconds;
    result.report.evaluation_seconds = eval_seconds;
    for (const Verdict& v : result.verdicts) {
        if (v.misrecognized) ++result.report.misrecognized;
    }

    if (suite.kind == SuiteKind::Composite) {
        SuiteReport image{sut.name(), SuiteKind::Image, 0, 0, 0.0, 0.0};
        SuiteReport object{sut.name(), SuiteKind::Object, 0, 0, 0.0, 0.0};
        for (const Verdict& v : result.verdicts) {
            SuiteReport& part = v.suite == SuiteKind::Image ? image : object;
            ++part.produced;
            if (v.misrecognized) ++part.misrecognized;
        }
        result.image_part = image;
        result.object_part = object;
    }
    return result;
}

AdditivityCheck composite_additivity(const SuiteReport& image, const SuiteReport& object,
                                     const SuiteReport& composite) {
    if (composite.produced != image.produced + object.produced) {
        fail(Errc::InconsistentReports,
             "composite produced " + std::to_string(composite.produced) + ", sub-suites total " +
                 std::to_string(image.produced + object.produced));
    }
    if (composite.misrecognized != image.misrecognized + object.misrecognized) {
        fail(Errc::InconsistentReports,
             "composite misrecognitions " + std::to_string(composite.misrecognized) + ", sub-suites total " +
                 std::to_string(image.misrecognized + object.misrecognized));
    }
    AdditivityCheck check;
    check.sum_misrecognized = composite.misrecognized;
    check.increase_vs_image = image.misrecognized > 0
                                  ? static_cast<double>(object.misrecognized) / image.misrecognized
                                  : 0.0;
    return check;
}

Extrapolation extrapolate_time(const ExtrapolationInputs& inputs, std::int64_t target_images_per_approach) {
    if (inputs.image_count <= 0 || inputs.object_count <= 0 || inputs.manual_images <= 0) {
        fail(Errc::InconsistentReports, "extrapolation needs positive image counts");
    }
    if (inputs.image_seconds <= 0.0 || inputs.object_seconds <= 0.0 || inputs.manual_minutes <= 0.0) {
        fail(Errc::InconsistentReports, "extrapolation needs positive times");
    }
    const double target = static_cast<double>(target_images_per_approach);
    Extrapolation out;
    out.automated_hours = (target * (inputs.image_seconds / inputs.image_count) +
                           target * (inputs.object_seconds / inputs.object_count)) /
                          3600.0;
    // The manual baseline produces the same grand total (both approaches).
    out.manual_hours = 2.0 * target * (inputs.manual_minutes / inputs.manual_images) / 60.0;
    out.reduction = 1.0 - out.automated_hours / out.manual_hours;
    return out;
}

}  // namespace morphtest
