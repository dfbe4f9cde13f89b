#include "morphtest/errors.hpp"

namespace morphtest {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::WrongMagic: return "WrongMagic";
        case Errc::TruncatedFile: return "TruncatedFile";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::LabelOutOfRange: return "LabelOutOfRange";
        case Errc::UnsupportedFormat: return "UnsupportedFormat";
        case Errc::MaxvalNot255: return "MaxvalNot255";
        case Errc::AllBlackImage: return "AllBlackImage";
        case Errc::NonPositiveSigma: return "NonPositiveSigma";
        case Errc::MalformedGrid: return "MalformedGrid";
        case Errc::TooFewVertices: return "TooFewVertices";
        case Errc::DegenerateSegment: return "DegenerateSegment";
        case Errc::MissingAnnotations: return "MissingAnnotations";
        case Errc::MalformedAnnotation: return "MalformedAnnotation";
        case Errc::WrongImageSize: return "WrongImageSize";
        case Errc::EmptyDataset: return "EmptyDataset";
        case Errc::EmptyReference: return "EmptyReference";
        case Errc::ShapeMismatch: return "ShapeMismatch";
        case Errc::ProcessSpawnFailure: return "ProcessSpawnFailure";
        case Errc::ProtocolViolation: return "ProtocolViolation";
        case Errc::Timeout: return "Timeout";
        case Errc::NoValidSeeds: return "NoValidSeeds";
        case Errc::InconsistentReports: return "InconsistentReports";
        case Errc::IoFailure: return "IoFailure";
    }
    return "UnknownError";
}

}  // namespace morphtest
