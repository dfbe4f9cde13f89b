#include <doctest.h>

#include <cstdlib>
#include <fstream>

#include "helpers.hpp"
#include "morphtest/harness.hpp"
#include "morphtest/pgm.hpp"
#include "morphtest/report.hpp"

using namespace morphtest;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_command(const std::string& command) {
    const auto out_file = std::filesystem::temp_directory_path() / "morphtest_cli_out.txt";
    const int rc = std::system((command + " > " + out_file.string() + " 2>&1").c_str());
    CommandResult result;
    result.exit_code = WEXITSTATUS(rc);
    std::ifstream in(out_file);
    result.output = {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    return result;
}

std::filesystem::path make_synthetic_seeds(const std::string& tag) {
    const auto dir = testutil::scratch_dir("cliseeds_" + tag);
    for (int d = 0; d < 2; ++d) {
        GrayImage img(28, 28, 0);
        for (int y = 6; y < 20; ++y) {
            for (int x = 6 + d * 4; x < 13 + d * 4; ++x) img.at(x, y) = 255;
        }
        write_pgm(img, dir / ("synth_" + std::to_string(d) + ".pgm"));
    }
    return dir;
}

}  // namespace

TEST_CASE("cli --help exits 0 and unknown flags exit 64") {
    CHECK(run_command(testutil::cli_path() + " --help").exit_code == 0);
    CHECK(run_command(testutil::cli_path() + " generate --help").exit_code == 0);
    CHECK(run_command(testutil::cli_path() + " --wobble").exit_code == 64);
    CHECK(run_command(testutil::cli_path() + " generate image --no-such-flag").exit_code == 64);
}

TEST_CASE("cli generate image prints the cardinality and writes a manifest") {
    const auto seeds = make_synthetic_seeds("gen");
    const auto out = testutil::scratch_dir("cliout_gen");
    const CommandResult result = run_command(testutil::cli_path() + " generate image --seeds " + seeds.string() +
                                             " --out " + (out / "suite").string());
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("1458 cases") != std::string::npos);
    CHECK(std::filesystem::exists(out / "suite" / "manifest.csv"));
    CHECK(std::filesystem::exists(out / "suite" / "images" / "img-synth_0-0000.pgm"));

    // Byte-identical regeneration under the same seed.
    const CommandResult again = run_command(testutil::cli_path() + " generate image --seeds " + seeds.string() +
                                            " --out " + (out / "suite2").string());
    CHECK(again.exit_code == 0);
    auto slurp = [](const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    };
    CHECK(slurp(out / "suite" / "manifest.csv") == slurp(out / "suite2" / "manifest.csv"));
    CHECK(slurp(out / "suite" / "images" / "img-synth_1-0500.pgm") ==
          slurp(out / "suite2" / "images" / "img-synth_1-0500.pgm"));
}

TEST_CASE("cli generate object without annotations exits 1 with a diagnostic") {
    const auto seeds = make_synthetic_seeds("noann");
    const auto out = testutil::scratch_dir("cliout_noann");
    const CommandResult result = run_command(testutil::cli_path() + " generate object --seeds " + seeds.string() +
                                             " --out " + (out / "suite").string());
    CHECK(result.exit_code == 1);
    CHECK(result.output.find("MissingAnnotations") != std::string::npos);
}

TEST_CASE("cli run with a perfect-oracle stub reports a zero rate") {
    const auto seeds = make_synthetic_seeds("run");
    const auto out = testutil::scratch_dir("cliout_run");
    REQUIRE(run_command(testutil::cli_path() + " generate image --seeds " + seeds.string() + " --out " +
                        (out / "suite").string())
                .exit_code == 0);

    // The stub answers the expected label recorded in the manifest, so the
    // run is perfect; seed validation would query images outside the
    // manifest, hence --no-validate.
    const std::string stub_cmd = testutil::stub_path() + " --answers " + (out / "suite" / "manifest.csv").string();
    const CommandResult result = run_command(testutil::cli_path() + " run --suite " + (out / "suite").string() +
                                             " --seeds " + seeds.string() + " --out " + (out / "report").string() +
                                             " --sut external --sut-cmd '" + stub_cmd + "' --no-validate");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("0.00%") != std::string::npos);
    CHECK(std::filesystem::exists(out / "report" / "cases.csv"));
    CHECK(std::filesystem::exists(out / "report" / "summary.tsv"));

    const auto reports = read_summary_tsv(out / "report" / "summary.tsv");
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].misrecognized == 0);

    // The report subcommand recomputes and agrees.
    const CommandResult rep = run_command(testutil::cli_path() + " report --from " + (out / "report").string());
    CHECK(rep.exit_code == 0);
    CHECK(rep.output.find("0/1458") != std::string::npos);
}

TEST_CASE("cli run with knn validates the seeds and evaluates") {
    const auto seeds = make_synthetic_seeds("knn");
    const auto out = testutil::scratch_dir("cliout_knn");
    REQUIRE(run_command(testutil::cli_path() + " generate image --seeds " + seeds.string() + " --out " +
                        (out / "suite").string())
                .exit_code == 0);
    const CommandResult result = run_command(testutil::cli_path() + " run --suite " + (out / "suite").string() +
                                             " --seeds " + seeds.string() + " --out " + (out / "report").string() +
                                             " --sut knn");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("image\tknn\t1458") != std::string::npos);
}

TEST_CASE("cli seeds validate exits 2 when the SUT rejects seeds") {
    const auto seeds = make_synthetic_seeds("val");
    const CommandResult result =
        run_command(testutil::cli_path() + " seeds validate --seeds " + seeds.string() +
                    " --sut external --sut-cmd '" + testutil::stub_path() + " --label 0'");
    CHECK(result.exit_code == 2);  // seed 1 is rejected by the constant-0 stub
    CHECK(result.output.find("REJECTED") != std::string::npos);

    const CommandResult ok = run_command(testutil::cli_path() + " seeds validate --seeds " + seeds.string() +
                                         " --sut knn");
    CHECK(ok.exit_code == 0);
}

TEST_CASE("cli extrapolate reproduces the published numbers from explicit rates") {
    const CommandResult result = run_command(
        testutil::cli_path() +
        " extrapolate --image-seconds 2521.80 --image-count 7290 --object-seconds 570.66 --object-count 3906");
    CHECK(result.exit_code == 0);
    CHECK(result.output.find("6.83 h") != std::string::npos);
    CHECK(result.output.find("146.20 h") != std::string::npos);
    CHECK(result.output.find("95.3") != std::string::npos);

    const CommandResult bad = run_command(testutil::cli_path() + " extrapolate --image-seconds 0 --image-count 10" +
                                          " --object-seconds 1 --object-count 10");
    CHECK(bad.exit_code == 1);
}
