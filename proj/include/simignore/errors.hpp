#pragma once

#include <stdexcept>
#include <string>

namespace simignore {

// Stable error codes; the CLI prints them as "ERR:<name>:<message>".
enum class Errc {
    ZeroImageTokens,
    ZeroUserTokens,
    IndexOutOfRange,
    DimensionMismatch,
    NonFiniteValue,
    ValueOutOfRange,
    EmptyFeatureMap,
    PoolBinEmpty,
    KOutOfRange,
    BudgetOutOfRange,
    BatchNotOne,
    SegmentationMismatch,
    NotPerfectSquare,
    LengthMismatch,
    DegenerateCovariance,
    ClusterIdOutOfRange,
    NonMonotonePredicate,
    BadMagic,
    BadVersion,
    TruncatedPayload,
    DimOverflow,
    FileNotFound,
    IoError,
    ManifestInvalid,
};

inline const char* errc_name(Errc code) {
    switch (code) {
        case Errc::ZeroImageTokens: return "ZeroImageTokens";
        case Errc::ZeroUserTokens: return "ZeroUserTokens";
        case Errc::IndexOutOfRange: return "IndexOutOfRange";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::NonFiniteValue: return "NonFiniteValue";
        case Errc::ValueOutOfRange: return "ValueOutOfRange";
        case Errc::EmptyFeatureMap: return "EmptyFeatureMap";
        case Errc::PoolBinEmpty: return "PoolBinEmpty";
        case Errc::KOutOfRange: return "KOutOfRange";
        case Errc::BudgetOutOfRange: return "BudgetOutOfRange";
        case Errc::BatchNotOne: return "BatchNotOne";
        case Errc::SegmentationMismatch: return "SegmentationMismatch";
        case Errc::NotPerfectSquare: return "NotPerfectSquare";
        case Errc::LengthMismatch: return "LengthMismatch";
        case Errc::DegenerateCovariance: return "DegenerateCovariance";
        case Errc::ClusterIdOutOfRange: return "ClusterIdOutOfRange";
        case Errc::NonMonotonePredicate: return "NonMonotonePredicate";
        case Errc::BadMagic: return "BadMagic";
        case Errc::BadVersion: return "BadVersion";
        case Errc::TruncatedPayload: return "TruncatedPayload";
        case Errc::DimOverflow: return "DimOverflow";
        case Errc::FileNotFound: return "FileNotFound";
        case Errc::IoError: return "IoError";
        case Errc::ManifestInvalid: return "ManifestInvalid";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }
    const char* code_name() const noexcept { return errc_name(code_); }

private:
    Errc code_;
};

}  // namespace simignore
