#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>

#include "apronid/dataio.hpp"
#include "apronid/execution.hpp"
#include "apronid/geometry.hpp"
#include "apronid/identification.hpp"
#include "apronid/photogrammetry.hpp"

namespace apronid {

enum class SynthShape {
  rectangle,  // length x secondary
  ellipse,    // axes length x secondary
  cross,      // fuselage of `length` plus a wing bar spanning `secondary`
};

// Cross proportions, as fractions of the fuselage length.
inline constexpr double kFuselageWidthRatio = 0.05;
inline constexpr double kWingChordRatio = 0.12;

struct SynthSpec {
  SynthShape shape = SynthShape::rectangle;
  double length_m = 1.0;
  double secondary_m = 1.0;
  double heading_deg = 0.0;  // rotation of the length axis from the +x column axis
  GroundSampleDistance gsd{100.0};
  std::uint64_t seed = 0;
};

// Canvas and shape center (in pixel-center coordinates) chosen for a spec.
struct SynthLayout {
  std::int32_t width = 0;
  std::int32_t height = 0;
  double center_x = 0.0;
  double center_y = 0.0;
};

struct SynthTruth {
  std::int64_t diameter_sq_px = 0;  // by enumeration over the rasterized mask
  double diameter_px = 0.0;
  std::size_t pixel_count = 0;
};

struct SynthMask {
  PixelMask mask;
  SynthTruth truth;
  SynthLayout layout;
};

// Rasterizes by pixel-center inclusion in the closed shape. The center sits on
// an integer or half-integer grid position, picked so no pixel center lies
// within a hair of the boundary; the seed orders the candidates. Headings
// theta and theta + 180 give identical masks. Throws DegenerateSpec when a
// dimension is under one pixel, lengths are non-finite or non-positive,
// length < secondary for rectangle/ellipse, or the raster would be empty.
SynthMask synth_mask(const SynthSpec& spec, Execution exec = Execution::parallel);

// Largest squared center distance over the rasterized mask, enumerated over
// every pair of row endpoints. Independent of the hull code path.
std::int64_t enumerate_diameter_sq(const PixelMask& mask);

struct SynthDatasetOptions {
  std::size_t per_type_count = 1;
  double noise_rel = 0.0;  // target length = actual * (1 + u), u ~ U[-noise, +noise]
  GroundSampleDistance gsd{3.13};
  std::uint64_t seed = 0;
};

// One image per instance: a plane-like cross at a random heading, written as
// a PNG ground-truth mask plus an identical RLE detection with score 1.0.
// Writes manifest.json and masks/ under out_dir and returns the manifest.
// Throws DegenerateSpec if noise_rel is outside [0, 0.5) and IoError on write
// failures.
DatasetManifest synth_dataset(const TypeDatabase& db, const SynthDatasetOptions& options,
                              const std::filesystem::path& out_dir,
                              Execution exec = Execution::parallel);

}  // namespace apronid
