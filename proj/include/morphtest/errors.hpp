#pragma once

#include <stdexcept>
#include <string>

namespace morphtest {

/// Error categories surfaced by the toolkit. Each value corresponds to a
/// contract violation or I/O failure named in the module documentation.
enum class Errc {
    WrongMagic,
    TruncatedFile,
    DimensionMismatch,
    LabelOutOfRange,
    UnsupportedFormat,
    MaxvalNot255,
    AllBlackImage,
    NonPositiveSigma,
    MalformedGrid,
    TooFewVertices,
    DegenerateSegment,
    MissingAnnotations,
    MalformedAnnotation,
    WrongImageSize,
    EmptyDataset,
    EmptyReference,
    ShapeMismatch,
    ProcessSpawnFailure,
    ProtocolViolation,
    Timeout,
    NoValidSeeds,
    InconsistentReports,
    IoFailure,
};

const char* errc_name(Errc code);

/// Single exception type carrying a machine-checkable error code.
class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const { return code_; }

  private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace morphtest
