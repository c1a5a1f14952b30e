#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace apronid {

enum class ErrorCode {
  // geometry
  EmptyPointSet,
  EmptyMask,
  InvalidMask,
  CoordinateOutOfRange,
  // photogrammetry
  InvalidCamera,
  // identification
  ParseError,
  DuplicateCode,
  NonPositiveLength,
  // evaluation
  DimensionMismatch,
  EmptySample,
  NonPositiveActual,
  UnknownCode,
  // dataio
  FileNotFound,
  UnsupportedPngFlavor,
  DecodeError,
  RunSumMismatch,
  SchemaError,
  MissingMaskFile,
  GsdMissing,
  IoError,
  // synthkit
  DegenerateSpec,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map it onto a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  // The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace apronid
