#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gbsk {

enum class ErrorKind {
    // graph validation
    NotSymmetric,
    SelfLoop,
    EmptyMatrix,
    EmptyDataset,
    LengthMismatch,
    // combinatorics / configuration
    OddSize,
    TooLarge,
    OutOfRange,
    KExceedsModes,
    DimensionMismatch,
    ConfigMismatch,
    UnsupportedSize,
    NotSinglePhotonOrbit,
    LossyEncodingRequiresGeneralPath,
    DisplacedLossUnsupported,
    // numerics
    SpectralBoundViolated,
    SingularMatrix,
    EigenFailure,
    NotPositiveDefinite,
    NotPsd,
    NotConverged,
    // dataset files
    MissingFile,
    MalformedLine,
    DanglingNode,
    AsymmetricEdgeLabels,
    UnknownRule,
    // benchmark
    TooFewGraphs,
    DegenerateLabels,
};

/// Groups of error kinds that share a process exit code.
enum class ErrorFamily {
    InvalidGraph,
    UnsupportedConfig,
    Numerical,
    DatasetFormat,
    Benchmark,
};

std::string_view to_string(ErrorKind kind);
ErrorFamily family_of(ErrorKind kind);

/// Exit code used by the command-line tool for an error family.
int exit_code(ErrorFamily family);

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &message);

    ErrorKind kind() const noexcept { return kind_; }
    ErrorFamily family() const noexcept { return family_of(kind_); }

   private:
    ErrorKind kind_;
};

}  // namespace gbsk
