#include "apronid/error.hpp"

namespace apronid {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyPointSet: return "EmptyPointSet";
    case ErrorCode::EmptyMask: return "EmptyMask";
    case ErrorCode::InvalidMask: return "InvalidMask";
    case ErrorCode::CoordinateOutOfRange: return "CoordinateOutOfRange";
    case ErrorCode::InvalidCamera: return "InvalidCamera";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateCode: return "DuplicateCode";
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptySample: return "EmptySample";
    case ErrorCode::NonPositiveActual: return "NonPositiveActual";
    case ErrorCode::UnknownCode: return "UnknownCode";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedPngFlavor: return "UnsupportedPngFlavor";
    case ErrorCode::DecodeError: return "DecodeError";
    case ErrorCode::RunSumMismatch: return "RunSumMismatch";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::MissingMaskFile: return "MissingMaskFile";
    case ErrorCode::GsdMissing: return "GsdMissing";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::DegenerateSpec: return "DegenerateSpec";
  }
  return "Unknown";
}

}  // namespace apronid
