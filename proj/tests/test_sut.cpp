#include <doctest.h>

#include "helpers.hpp"
#include "morphtest/sut.hpp"

using namespace morphtest;

namespace {

const char* kEchoSevenLoop =
    "while read tag id rest; do echo \"R $id 7 0 0 0 0 0 0 0 1 0 0\"; done";

}  // namespace

TEST_CASE("external stub answering a constant label conforms to the protocol") {
    ExternalClassifier sut(kEchoSevenLoop);
    const GrayImage img = testutil::random_image(28, 28, 1);
    const Prediction pred = sut.predict(img, "case-1");
    CHECK(pred.label == 7);
    CHECK(pred.scores[7] == doctest::Approx(1.0));
    // Serial reuse works.
    CHECK(sut.predict(img, "case-2").label == 7);
}

TEST_CASE("external stub binary speaks the protocol") {
    ExternalClassifier sut(testutil::stub_path() + " --label 3");
    const Prediction pred = sut.predict(testutil::random_image(28, 28, 2), "x1");
    CHECK(pred.label == 3);
    CHECK(pred.scores[3] == doctest::Approx(1.0));
}

TEST_CASE("malformed responses raise ProtocolViolation") {
    ExternalClassifier sut("while read tag id rest; do echo banana; done");
    CHECK_THROWS_WITH_AS(sut.predict(GrayImage(28, 28, 0), "c"), doctest::Contains("ProtocolViolation"), Error);
}

TEST_CASE("out-of-range labels raise ProtocolViolation") {
    ExternalClassifier sut(testutil::stub_path() + " --out-of-range");
    CHECK_THROWS_WITH_AS(sut.predict(GrayImage(28, 28, 0), "c"), doctest::Contains("ProtocolViolation"), Error);
}

TEST_CASE("mismatched case ids raise ProtocolViolation") {
    ExternalClassifier sut("while read tag id rest; do echo \"R other 1 1 0 0 0 0 0 0 0 0 0\"; done");
    CHECK_THROWS_WITH_AS(sut.predict(GrayImage(28, 28, 0), "mine"), doctest::Contains("ProtocolViolation"), Error);
}

TEST_CASE("a command that produces no output raises ProcessSpawnFailure") {
    ExternalClassifier sut("true");
    CHECK_THROWS_WITH_AS(sut.predict(GrayImage(28, 28, 0), "c"), doctest::Contains("ProcessSpawnFailure"), Error);
}

TEST_CASE("a silent SUT times out") {
    ExternalClassifier sut("sleep 30", 0.2);
    CHECK_THROWS_WITH_AS(sut.predict(GrayImage(28, 28, 0), "c"), doctest::Contains("Timeout"), Error);
}

TEST_CASE("negative scores are rejected") {
    ExternalClassifier sut("while read tag id rest; do echo \"R $id 1 0 -1 0 0 0 0 0 0 0 0\"; done");
    CHECK_THROWS_WITH_AS(sut.predict(GrayImage(28, 28, 0), "c"), doctest::Contains("ProtocolViolation"), Error);
}
