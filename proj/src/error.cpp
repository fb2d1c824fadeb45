#include "samaug/error.hpp"

namespace samaug {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::SumMismatch: return "SumMismatch";
    case ErrorKind::EmptyDims: return "EmptyDims";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::UnreadableFile: return "UnreadableFile";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::DimMismatch: return "DimMismatch";
    case ErrorKind::AllZero: return "AllZero";
    case ErrorKind::BadWeights: return "BadWeights";
    case ErrorKind::InvalidPrediction: return "InvalidPrediction";
    case ErrorKind::BadConfig: return "BadConfig";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::SingleClass: return "SingleClass";
    case ErrorKind::BadMagic: return "BadMagic";
    case ErrorKind::TruncatedFile: return "TruncatedFile";
    case ErrorKind::DimOverflow: return "DimOverflow";
    case ErrorKind::MissingClass: return "MissingClass";
    case ErrorKind::BadGeometry: return "BadGeometry";
    case ErrorKind::BadManifest: return "BadManifest";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace samaug
