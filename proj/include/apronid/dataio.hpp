#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "apronid/evaluation.hpp"
#include "apronid/execution.hpp"
#include "apronid/geometry.hpp"
#include "apronid/photogrammetry.hpp"

namespace apronid {

// ---------------------------------------------------------------------------
// PNG masks: 8-bit grayscale only, any nonzero value is foreground.

// Throws FileNotFound, UnsupportedPngFlavor or DecodeError.
PixelMask load_mask_png(const std::filesystem::path& path);

// Writes foreground as 255, background as 0. Throws IoError.
void save_mask_png(const PixelMask& mask, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Run-length masks

// Row-major runs alternating background/foreground, background first (a mask
// starting with foreground has a leading 0). Runs sum to width * height.
struct RleMask {
  std::int32_t width = 0;
  std::int32_t height = 0;
  std::vector<std::uint64_t> runs;

  friend bool operator==(const RleMask&, const RleMask&) = default;
};

RleMask rle_encode(const PixelMask& mask);

// Throws RunSumMismatch when the runs do not cover the raster exactly.
PixelMask rle_decode(const RleMask& rle);

// "<width> <height>\n<run> <run> ...", LF separated, no trailing newline.
std::string rle_to_text(const RleMask& rle);

// Accepts LF or CRLF and an optional trailing line break. Throws DecodeError
// on malformed text.
RleMask rle_from_text(std::string_view text, std::string_view source = "<inline>");

PixelMask load_mask_rle(const std::filesystem::path& path);
void save_mask_rle(const PixelMask& mask, const std::filesystem::path& path);

// Dispatches on extension: ".png" or ".rle".
PixelMask load_mask(const std::filesystem::path& path);
void save_mask(const PixelMask& mask, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Dataset manifests

struct GroundTruthEntry {
  std::string mask_path;
  std::string type_code;
};

struct DetectionEntry {
  std::string mask_path;
  double score = 0.0;
};

struct ImageEntry {
  std::string id;
  std::int32_t width = 0;
  std::int32_t height = 0;
  std::vector<GroundTruthEntry> ground_truth;
  std::vector<DetectionEntry> detections;
};

struct DatasetManifest {
  std::optional<double> gsd_cm_per_px;
  std::optional<CameraModel> camera;
  std::vector<ImageEntry> images;
  // Mask paths resolve relative to this directory.
  std::filesystem::path base_dir;

  // The explicit value wins over the camera block.
  GroundSampleDistance gsd() const;
  std::filesystem::path resolve(const std::string& mask_path) const;
};

// Validates the schema (unknown keys rejected) and checks that every mask
// file exists. Throws SchemaError (message carries the JSON path), GsdMissing
// or MissingMaskFile.
DatasetManifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir,
                               std::string_view source = "<inline>");

DatasetManifest load_manifest(const std::filesystem::path& path);

// Stable key order and formatting; identical manifests give identical bytes.
std::string manifest_to_json(const DatasetManifest& manifest);

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path);

struct LoadedDataset {
  std::vector<DetectionRecord> detections;
  std::vector<GroundTruthRecord> ground_truths;
};

// Loads every referenced mask (in parallel when asked) and checks it against
// the declared image size. Records keep manifest order. Errors name the file.
LoadedDataset load_dataset_masks(const DatasetManifest& manifest,
                                 Execution exec = Execution::parallel);

// Reads a whole file; throws FileNotFound.
std::string read_text_file(const std::filesystem::path& path);

// Writes bytes verbatim; throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace apronid
