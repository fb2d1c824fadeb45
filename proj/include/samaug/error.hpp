#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace samaug {

enum class ErrorKind {
  // maskio
  SumMismatch,
  EmptyDims,
  DimensionMismatch,
  UnreadableFile,
  SchemaError,
  // augment / ensemble
  DimMismatch,
  AllZero,
  BadWeights,
  InvalidPrediction,
  BadConfig,
  // metrics
  EmptyInput,
  SingleClass,
  // pipeline
  BadMagic,
  TruncatedFile,
  DimOverflow,
  MissingClass,
  BadGeometry,
  BadManifest,
  IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library. `kind()` is the stable, testable part;
/// the message carries context (file names, entry indices).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix, for re-throwing with more context.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

}  // namespace samaug
