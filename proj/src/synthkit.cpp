#include "apronid/synthkit.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>

#include "apronid/error.hpp"

namespace apronid {

namespace {

// Pixel centers closer than this to the shape boundary make the rasterization
// sensitive to rounding, so the layout avoids them.
constexpr double kBoundaryHair = 1e-6;
constexpr double kMaxHalfExtentPx = 16384.0;

struct Footprint {
  SynthShape shape;
  double half_length;  // px, along the heading
  double half_secondary;
  double half_fuselage_width;
  double half_chord;
  double cos_h;
  double sin_h;

  // Signed distance-like value: <= 0 inside the closed shape, roughly in px
  // near the boundary.
  double signed_value(double dx, double dy) const {
    const double u = dx * cos_h + dy * sin_h;
    const double v = -dx * sin_h + dy * cos_h;
    switch (shape) {
      case SynthShape::rectangle:
        return std::max(std::abs(u) - half_length, std::abs(v) - half_secondary);
      case SynthShape::ellipse: {
        const double r = std::hypot(u / half_length, v / half_secondary);
        return (r - 1.0) * std::min(half_length, half_secondary);
      }
      case SynthShape::cross: {
        const double fuselage = std::max(std::abs(u) - half_length, std::abs(v) - half_fuselage_width);
        const double wing = std::max(std::abs(u) - half_chord, std::abs(v) - half_secondary);
        return std::min(fuselage, wing);
      }
    }
    return 1.0;
  }

  double half_extent() const {
    switch (shape) {
      case SynthShape::rectangle: return std::hypot(half_length, half_secondary);
      case SynthShape::ellipse: return std::max(half_length, half_secondary);
      case SynthShape::cross:
        return std::max(std::hypot(half_length, half_fuselage_width), std::hypot(half_chord, half_secondary));
    }
    return 0.0;
  }
};

// Exact values on the axes so axis-aligned shapes carry no rounding.
void heading_cos_sin(double heading_deg, double& c, double& s) {
  double h = std::fmod(heading_deg, 360.0);
  if (h < 0) h += 360.0;
  if (h == 0.0) {
    c = 1.0, s = 0.0;
  } else if (h == 90.0) {
    c = 0.0, s = 1.0;
  } else if (h == 180.0) {
    c = -1.0, s = 0.0;
  } else if (h == 270.0) {
    c = 0.0, s = -1.0;
  } else {
    const double rad = h * std::numbers::pi / 180.0;
    c = std::cos(rad);
    s = std::sin(rad);
  }
}

Footprint make_footprint(const SynthSpec& spec) {
  const auto reject = [](const std::string& why) { throw Error(ErrorCode::DegenerateSpec, why); };
  if (!std::isfinite(spec.length_m) || spec.length_m <= 0.0 || !std::isfinite(spec.secondary_m) ||
      spec.secondary_m <= 0.0) {
    reject("lengths must be finite and positive");
  }
  if (!std::isfinite(spec.heading_deg)) reject("heading must be finite");
  if (spec.shape != SynthShape::cross && spec.length_m < spec.secondary_m) {
    reject("length must not be shorter than the secondary dimension");
  }
  const double m_per_px = spec.gsd.m_per_px();
  const double length_px = spec.length_m / m_per_px;
  const double secondary_px = spec.secondary_m / m_per_px;
  if (length_px < 1.0 || secondary_px < 1.0) {
    reject(fmt::format("shape {:.3f} x {:.3f} px is smaller than one pixel", length_px, secondary_px));
  }

  Footprint f{spec.shape, length_px / 2.0, secondary_px / 2.0,
              kFuselageWidthRatio * length_px / 2.0, kWingChordRatio * length_px / 2.0, 1.0, 0.0};
  heading_cos_sin(spec.heading_deg, f.cos_h, f.sin_h);
  if (f.half_extent() > kMaxHalfExtentPx) reject("shape too large to rasterize");
  return f;
}

struct RasterResult {
  std::vector<PixelPoint> points;
  bool touches_boundary = false;
};

RasterResult rasterize(const Footprint& fp, const SynthLayout& layout, Execution exec) {
  const std::int32_t height = layout.height;
  std::vector<std::vector<PixelPoint>> rows(static_cast<std::size_t>(height));
  bool touches = false;
  auto scan_row = [&](std::int32_t y, std::vector<PixelPoint>& row, bool& hit) {
    const double dy = y - layout.center_y;
    for (std::int32_t x = 0; x < layout.width; ++x) {
      const double f = fp.signed_value(x - layout.center_x, dy);
      if (std::abs(f) < kBoundaryHair) hit = true;
      if (f <= 0.0) row.push_back({x, y});
    }
  };
  if (exec == Execution::serial) {
    for (std::int32_t y = 0; y < height; ++y) scan_row(y, rows[y], touches);
  } else {
#pragma omp parallel for schedule(dynamic, 16) reduction(|| : touches)
    for (std::int32_t y = 0; y < height; ++y) {
      bool hit = false;
      scan_row(y, rows[y], hit);
      touches = touches || hit;
    }
  }
  RasterResult out;
  out.touches_boundary = touches;
  for (auto& row : rows) out.points.insert(out.points.end(), row.begin(), row.end());
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Uniform in [0, 1) from the top 53 bits; portable across standard libraries.
double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::int64_t enumerate_diameter_sq(const PixelMask& mask) {
  std::vector<PixelPoint> ends;
  const auto pts = mask.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const bool row_start = i == 0 || pts[i - 1].y != pts[i].y;
    const bool row_end = i + 1 == pts.size() || pts[i + 1].y != pts[i].y;
    if (row_start || row_end) ends.push_back(pts[i]);
  }
  std::int64_t best = 0;
  for (std::size_t i = 0; i < ends.size(); ++i) {
    for (std::size_t j = i + 1; j < ends.size(); ++j) {
      best = std::max(best, squared_distance(ends[i], ends[j]));
    }
  }
  return best;
}

SynthMask synth_mask(const SynthSpec& spec, Execution exec) {
  const Footprint fp = make_footprint(spec);
  const auto half = static_cast<std::int32_t>(std::ceil(fp.half_extent())) + 2;
  SynthLayout base{2 * half, 2 * half, static_cast<double>(half), static_cast<double>(half)};

  constexpr std::array<std::array<double, 2>, 4> kOffsets = {{{0.0, 0.0}, {0.5, 0.0}, {0.0, 0.5}, {0.5, 0.5}}};
  const std::size_t first = static_cast<std::size_t>(spec.seed % kOffsets.size());

  SynthLayout chosen = base;
  RasterResult raster;
  for (std::size_t k = 0; k < kOffsets.size(); ++k) {
    const auto& off = kOffsets[(first + k) % kOffsets.size()];
    SynthLayout layout = base;
    layout.center_x += off[0];
    layout.center_y += off[1];
    RasterResult r = rasterize(fp, layout, exec);
    if (k == 0 || !r.touches_boundary) {
      chosen = layout;
      raster = std::move(r);
    }
    if (!raster.touches_boundary) break;
  }
  if (raster.points.empty()) throw Error(ErrorCode::DegenerateSpec, "rasterized mask is empty");

  SynthMask out;
  out.layout = chosen;
  out.mask = PixelMask::from_points(chosen.width, chosen.height, std::move(raster.points));
  out.truth.pixel_count = out.mask.pixel_count();
  out.truth.diameter_sq_px = enumerate_diameter_sq(out.mask);
  out.truth.diameter_px = std::sqrt(static_cast<double>(out.truth.diameter_sq_px));
  return out;
}

DatasetManifest synth_dataset(const TypeDatabase& db, const SynthDatasetOptions& options,
                              const std::filesystem::path& out_dir, Execution exec) {
  if (!(options.noise_rel >= 0.0 && options.noise_rel < 0.5)) {
    throw Error(ErrorCode::DegenerateSpec, "noise must lie in [0, 0.5)");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "masks", ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + (out_dir / "masks").string() + ": " + ec.message());

  struct Instance {
    const AircraftType* type;
    std::size_t ordinal;
    std::string id;
    double target_length_m = 0.0;
    SynthTruth truth;
    std::int32_t width = 0;
    std::int32_t height = 0;
  };
  std::vector<Instance> instances;
  for (const AircraftType& t : db.entries()) {
    for (std::size_t k = 0; k < options.per_type_count; ++k) {
      instances.push_back({&t, k, fmt::format("{:04d}_{}", instances.size(), t.code), 0.0, {}, 0, 0});
    }
  }

  std::vector<std::exception_ptr> failures(instances.size());
  const long n = static_cast<long>(instances.size());
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
  for (long i = 0; i < n; ++i) {
    Instance& inst = instances[i];
    try {
      std::mt19937_64 rng(splitmix64(options.seed ^ splitmix64(static_cast<std::uint64_t>(i))));
      const double u = options.noise_rel * (2.0 * unit_uniform(rng) - 1.0);
      const double heading = 360.0 * unit_uniform(rng);
      inst.target_length_m = inst.type->actual_length_m * (1.0 + u);

      SynthSpec spec;
      spec.shape = SynthShape::cross;
      spec.length_m = inst.target_length_m;
      spec.secondary_m = 0.8 * inst.target_length_m;
      spec.heading_deg = heading;
      spec.gsd = options.gsd;
      spec.seed = rng();
      SynthMask synth = synth_mask(spec, Execution::serial);
      inst.truth = synth.truth;
      inst.width = synth.mask.width();
      inst.height = synth.mask.height();
      save_mask_png(synth.mask, out_dir / "masks" / (inst.id + "_gt.png"));
      save_mask_rle(synth.mask, out_dir / "masks" / (inst.id + "_det.rle"));
    } catch (...) {
      failures[i] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  DatasetManifest manifest;
  manifest.gsd_cm_per_px = options.gsd.cm_per_px();
  manifest.base_dir = out_dir;
  std::string truth_csv = "image_id,type_code,target_length_m,diameter_px,pixel_count\n";
  for (const Instance& inst : instances) {
    ImageEntry img;
    img.id = inst.id;
    img.width = inst.width;
    img.height = inst.height;
    img.ground_truth.push_back({"masks/" + inst.id + "_gt.png", inst.type->code});
    img.detections.push_back({"masks/" + inst.id + "_det.rle", 1.0});
    manifest.images.push_back(std::move(img));
    truth_csv += fmt::format("{},{},{:.6f},{:.6f},{}\n", inst.id, inst.type->code, inst.target_length_m,
                             inst.truth.diameter_px, inst.truth.pixel_count);
  }
  save_manifest(manifest, out_dir / "manifest.json");
  write_text_file(out_dir / "truth.csv", truth_csv);
  return manifest;
}

}  // namespace apronid
