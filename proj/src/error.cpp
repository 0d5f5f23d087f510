#include "gbsk/error.hpp"

namespace gbsk {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotSymmetric: return "NotSymmetric";
        case ErrorKind::SelfLoop: return "SelfLoop";
        case ErrorKind::EmptyMatrix: return "EmptyMatrix";
        case ErrorKind::EmptyDataset: return "EmptyDataset";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::OddSize: return "OddSize";
        case ErrorKind::TooLarge: return "TooLarge";
        case ErrorKind::OutOfRange: return "OutOfRange";
        case ErrorKind::KExceedsModes: return "KExceedsModes";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::ConfigMismatch: return "ConfigMismatch";
        case ErrorKind::UnsupportedSize: return "UnsupportedSize";
        case ErrorKind::NotSinglePhotonOrbit: return "NotSinglePhotonOrbit";
        case ErrorKind::LossyEncodingRequiresGeneralPath: return "LossyEncodingRequiresGeneralPath";
        case ErrorKind::DisplacedLossUnsupported: return "DisplacedLossUnsupported";
        case ErrorKind::SpectralBoundViolated: return "SpectralBoundViolated";
        case ErrorKind::SingularMatrix: return "SingularMatrix";
        case ErrorKind::EigenFailure: return "EigenFailure";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::NotPsd: return "NotPsd";
        case ErrorKind::NotConverged: return "NotConverged";
        case ErrorKind::MissingFile: return "MissingFile";
        case ErrorKind::MalformedLine: return "MalformedLine";
        case ErrorKind::DanglingNode: return "DanglingNode";
        case ErrorKind::AsymmetricEdgeLabels: return "AsymmetricEdgeLabels";
        case ErrorKind::UnknownRule: return "UnknownRule";
        case ErrorKind::TooFewGraphs: return "TooFewGraphs";
        case ErrorKind::DegenerateLabels: return "DegenerateLabels";
    }
    return "Unknown";
}

ErrorFamily family_of(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NotSymmetric:
        case ErrorKind::SelfLoop:
        case ErrorKind::EmptyMatrix:
        case ErrorKind::EmptyDataset:
        case ErrorKind::LengthMismatch:
            return ErrorFamily::InvalidGraph;
        case ErrorKind::SpectralBoundViolated:
        case ErrorKind::SingularMatrix:
        case ErrorKind::EigenFailure:
        case ErrorKind::NotPositiveDefinite:
        case ErrorKind::NotPsd:
        case ErrorKind::NotConverged:
            return ErrorFamily::Numerical;
        case ErrorKind::MissingFile:
        case ErrorKind::MalformedLine:
        case ErrorKind::DanglingNode:
        case ErrorKind::AsymmetricEdgeLabels:
        case ErrorKind::UnknownRule:
            return ErrorFamily::DatasetFormat;
        case ErrorKind::TooFewGraphs:
        case ErrorKind::DegenerateLabels:
            return ErrorFamily::Benchmark;
        default:
            return ErrorFamily::UnsupportedConfig;
    }
}

int exit_code(ErrorFamily family) {
    switch (family) {
        case ErrorFamily::DatasetFormat: return 3;
        case ErrorFamily::InvalidGraph: return 4;
        case ErrorFamily::Numerical: return 5;
        case ErrorFamily::UnsupportedConfig: return 6;
        case ErrorFamily::Benchmark: return 7;
    }
    return 1;
}

Error::Error(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

}  // namespace gbsk
