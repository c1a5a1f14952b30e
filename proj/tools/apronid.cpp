// apronid: aircraft measurement and identification from segmentation masks.

#include <fmt/format.h>

#include <cstdlib>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "apronid/dataio.hpp"
#include "apronid/error.hpp"
#include "apronid/geometry.hpp"
#include "apronid/identification.hpp"
#include "apronid/photogrammetry.hpp"
#include "apronid/report.hpp"
#include "apronid/synthkit.hpp"
#include "json.hpp"

namespace {

using apronid::ErrorCode;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitInternal = 4;

// Flag combinations CLI11 cannot express; reported as usage errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GlobalOptions {
  std::string format = "text";
  bool serial = false;

  apronid::Execution exec() const {
    return serial ? apronid::Execution::serial : apronid::Execution::parallel;
  }
};

struct CameraFlags {
  std::optional<double> sensor_width_mm;
  std::optional<double> altitude_m;
  std::optional<double> focal_length_mm;
  std::optional<std::int64_t> image_width_px;

  void attach(CLI::App& cmd, bool required) {
    auto* a = cmd.add_option("--sensor-width-mm", sensor_width_mm, "Sensor width (mm)")->check(CLI::PositiveNumber);
    auto* b = cmd.add_option("--altitude-m", altitude_m, "Flight altitude (m)")->check(CLI::PositiveNumber);
    auto* c = cmd.add_option("--focal-length-mm", focal_length_mm, "Focal length (mm)")->check(CLI::PositiveNumber);
    auto* d = cmd.add_option("--image-width-px", image_width_px, "Image width (px)")->check(CLI::PositiveNumber);
    if (required) {
      for (auto* opt : {a, b, c, d}) opt->required();
    }
  }

  bool any() const { return sensor_width_mm || altitude_m || focal_length_mm || image_width_px; }
  bool all() const { return sensor_width_mm && altitude_m && focal_length_mm && image_width_px; }

  apronid::CameraModel model() const {
    return {*sensor_width_mm, *altitude_m, *focal_length_mm, *image_width_px};
  }
};

// --gsd wins over camera flags; camera flags must come as a complete set.
struct GsdFlags {
  std::optional<double> gsd;
  CameraFlags camera;

  void attach(CLI::App& cmd) {
    cmd.add_option("--gsd", gsd, "Ground sample distance (cm/px)")->check(CLI::PositiveNumber);
    camera.attach(cmd, false);
  }

  apronid::GroundSampleDistance resolve() const {
    if (gsd) return apronid::GroundSampleDistance(*gsd);
    if (!camera.any()) throw UsageError("either --gsd or the four camera flags are required");
    if (!camera.all()) {
      throw UsageError(
          "camera flags need all of --sensor-width-mm, --altitude-m, --focal-length-mm, --image-width-px");
    }
    return apronid::compute_gsd(camera.model());
  }
};

apronid::TypeDatabase resolve_types(const std::optional<std::string>& flag) {
  if (flag) return apronid::load_type_db(std::filesystem::path(*flag));
  if (const char* env = std::getenv("APRONID_TYPES"); env != nullptr && *env != '\0') {
    return apronid::load_type_db(std::filesystem::path(env));
  }
  return apronid::TypeDatabase::builtin();
}

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

// ---------------------------------------------------------------------------

int run_gsd(const GlobalOptions& g, const CameraFlags& flags) {
  const apronid::GroundSampleDistance gsd = apronid::compute_gsd(flags.model());
  if (g.format == "json") {
    print_json({{"version", apronid::kReportVersion}, {"gsd_cm_per_px", gsd.cm_per_px()}});
  } else if (g.format == "csv") {
    std::cout << "gsd_cm_per_px\n" << fmt::format("{}", gsd.cm_per_px()) << "\n";
  } else {
    std::cout << fmt::format("{:.2f} cm/px\n", gsd.cm_per_px());
  }
  return kExitOk;
}

struct IdentifyFlags {
  std::string mask;
  GsdFlags gsd;
  std::optional<std::string> types;
};

int run_identify(const GlobalOptions& g, const IdentifyFlags& f) {
  const apronid::GroundSampleDistance gsd = f.gsd.resolve();
  const apronid::TypeDatabase db = resolve_types(f.types);
  const apronid::PixelMask mask = apronid::load_mask(f.mask);
  const apronid::FarthestPair pair = apronid::mask_farthest_pair(mask);
  const double length = apronid::length_m(pair.distance(), gsd);
  const double area = apronid::surface_area_m2(mask.pixel_count(), gsd);
  const apronid::AircraftType& type = apronid::nearest_type(length, db);

  if (g.format == "json") {
    print_json({{"version", apronid::kReportVersion},
                {"mask", f.mask},
                {"gsd_cm_per_px", gsd.cm_per_px()},
                {"pixel_count", mask.pixel_count()},
                {"diameter_px", pair.distance()},
                {"length_m", length},
                {"area_m2", area},
                {"type_code", type.code},
                {"type_name", type.full_name}});
  } else if (g.format == "csv") {
    std::cout << "mask,pixel_count,diameter_px,length_m,area_m2,type_code\n"
              << fmt::format("{},{},{},{},{},{}\n", f.mask, mask.pixel_count(), pair.distance(), length, area,
                             type.code);
  } else {
    std::cout << fmt::format("type:   {} ({})\nlength: {:.2f} m\narea:   {:.2f} m2\n", type.code, type.full_name,
                             length, area);
  }
  return kExitOk;
}

struct EvaluateFlags {
  std::string manifest;
  std::optional<std::string> types;
  std::string out = ".";
};

int run_evaluate(const GlobalOptions& g, const EvaluateFlags& f) {
  const apronid::TypeDatabase db = resolve_types(f.types);
  const apronid::DatasetManifest manifest = apronid::load_manifest(f.manifest);
  const apronid::EvalReport report = apronid::evaluate_dataset(manifest, db, g.exec());
  apronid::write_report(report, f.out);
  if (g.format == "json") {
    std::cout << apronid::report_to_json(report);
  } else if (g.format == "csv") {
    std::cout << apronid::confusion_to_csv(report.confusion);
  } else {
    std::cout << apronid::report_summary(report);
  }
  return kExitOk;
}

struct SynthFlags {
  std::string out;
  std::size_t per_type = 10;
  double noise = 0.0;
  double gsd = 3.13;
  std::uint64_t seed = 0;
  std::optional<std::string> types;
};

int run_synth(const GlobalOptions& g, const SynthFlags& f) {
  const apronid::TypeDatabase db = resolve_types(f.types);
  apronid::SynthDatasetOptions options;
  options.per_type_count = f.per_type;
  options.noise_rel = f.noise;
  options.gsd = apronid::GroundSampleDistance(f.gsd);
  options.seed = f.seed;
  const apronid::DatasetManifest manifest = apronid::synth_dataset(db, options, f.out, g.exec());
  const std::string manifest_path = (std::filesystem::path(f.out) / "manifest.json").string();
  if (g.format == "json") {
    print_json({{"version", apronid::kReportVersion},
                {"manifest", manifest_path},
                {"images", manifest.images.size()}});
  } else if (g.format == "csv") {
    std::cout << "manifest,images\n" << fmt::format("{},{}\n", manifest_path, manifest.images.size());
  } else {
    std::cout << fmt::format("wrote {} images to {}\n", manifest.images.size(), manifest_path);
  }
  return kExitOk;
}

int run_hull(const GlobalOptions& g, const std::string& mask_path) {
  const apronid::PixelMask mask = apronid::load_mask(mask_path);
  if (mask.empty()) throw apronid::Error(ErrorCode::EmptyMask, "mask '" + mask_path + "' has no foreground");
  const std::vector<apronid::PixelPoint> candidates = mask.row_extremes();
  const apronid::ConvexHull hull = apronid::convex_hull_giftwrap(candidates);
  const apronid::FarthestPair pair = apronid::hull_farthest_pair(hull);

  if (g.format == "json") {
    Json vertices = Json::array();
    for (const auto& v : hull.vertices) vertices.push_back({v.x, v.y});
    print_json({{"version", apronid::kReportVersion},
                {"mask", mask_path},
                {"vertices", std::move(vertices)},
                {"diameter_px", pair.distance()},
                {"diameter_sq_px", pair.squared_distance},
                {"farthest_pair", {{pair.first.x, pair.first.y}, {pair.second.x, pair.second.y}}}});
  } else if (g.format == "csv") {
    std::cout << "index,x,y,diameter_px\n";
    for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
      std::cout << fmt::format("{},{},{},{}\n", i, hull.vertices[i].x, hull.vertices[i].y, pair.distance());
    }
  } else {
    std::cout << fmt::format("{} vertices (x, y):\n", hull.vertices.size());
    for (const auto& v : hull.vertices) std::cout << fmt::format("  {} {}\n", v.x, v.y);
    std::cout << fmt::format("diameter: {:.4f} px\n", pair.distance());
  }
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidCamera:
    case ErrorCode::DegenerateSpec:
      return kExitUsage;
    default:
      return kExitData;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aircraft measurement and identification from segmentation masks"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  app.set_version_flag("--version", apronid::kReportVersion);

  GlobalOptions global;
  app.add_option("--format", global.format, "Output format")
      ->check(CLI::IsMember({"json", "text", "csv"}))
      ->capture_default_str();
  app.add_flag("--serial", global.serial, "Run the serial reference kernels");

  CameraFlags gsd_flags;
  auto* gsd_cmd = app.add_subcommand("gsd", "Ground sample distance from camera geometry");
  gsd_flags.attach(*gsd_cmd, true);

  IdentifyFlags identify;
  auto* identify_cmd = app.add_subcommand("identify", "Measure one mask and name the nearest type");
  identify_cmd->add_option("--mask", identify.mask, "Mask file (.png or .rle)")->required();
  identify.gsd.attach(*identify_cmd);
  identify_cmd->add_option("--types", identify.types, "Type table CSV (default: $APRONID_TYPES or built-in)");

  EvaluateFlags evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Score detections in a dataset manifest");
  evaluate_cmd->add_option("--manifest", evaluate.manifest, "Dataset manifest JSON")->required();
  evaluate_cmd->add_option("--types", evaluate.types, "Type table CSV (default: $APRONID_TYPES or built-in)");
  evaluate_cmd->add_option("--out", evaluate.out, "Report directory")->capture_default_str();

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic dataset with known truth");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--per-type", synth.per_type, "Instances per type")->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise, "Relative length noise in [0, 0.5)")
      ->check(CLI::Validator(
          [](const std::string& s) -> std::string {
            double v = 0.0;
            if (!CLI::detail::lexical_cast(s, v) || !(v >= 0.0 && v < 0.5)) return "must lie in [0, 0.5)";
            return {};
          },
          "[0, 0.5)"))
      ->capture_default_str();
  synth_cmd->add_option("--gsd", synth.gsd, "Ground sample distance (cm/px)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--types", synth.types, "Type table CSV (default: $APRONID_TYPES or built-in)");

  std::string hull_mask;
  auto* hull_cmd = app.add_subcommand("hull", "Convex hull vertices and diameter of a mask");
  hull_cmd->add_option("--mask", hull_mask, "Mask file (.png or .rle)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gsd_cmd) return run_gsd(global, gsd_flags);
    if (*identify_cmd) return run_identify(global, identify);
    if (*evaluate_cmd) return run_evaluate(global, evaluate);
    if (*synth_cmd) return run_synth(global, synth);
    if (*hull_cmd) return run_hull(global, hull_mask);
  } catch (const UsageError& e) {
    std::cerr << "apronid: " << e.what() << "\n";
    return kExitUsage;
  } catch (const apronid::Error& e) {
    std::cerr << "apronid: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "apronid: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
