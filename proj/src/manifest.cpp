#include <exception>
#include <set>

#include "apronid/dataio.hpp"
#include "apronid/error.hpp"
#include "json.hpp"

namespace apronid {

namespace {

using Json = nlohmann::json;

class SchemaReader {
 public:
  explicit SchemaReader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    throw Error(ErrorCode::SchemaError, source_ + ": " + (path.empty() ? "/" : path) + ": " + what);
  }

  void only_keys(const Json& obj, const std::string& path, std::initializer_list<std::string_view> allowed) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (const auto& item : obj.items()) {
      bool known = false;
      for (std::string_view k : allowed) known = known || item.key() == k;
      if (!known) fail(path + "/" + item.key(), "unknown key");
    }
  }

  const Json& required(const Json& obj, const std::string& path, const std::string& key) const {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path + "/" + key, "missing required key");
    return *it;
  }

  double positive_number(const Json& v, const std::string& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    const double d = v.get<double>();
    if (!(d > 0.0)) fail(path, "must be positive");
    return d;
  }

  std::int64_t positive_integer(const Json& v, const std::string& path) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    const std::int64_t i = v.get<std::int64_t>();
    if (i <= 0) fail(path, "must be positive");
    return i;
  }

  std::string string(const Json& v, const std::string& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    std::string s = v.get<std::string>();
    if (s.empty()) fail(path, "must not be empty");
    return s;
  }

 private:
  std::string source_;
};

CameraModel read_camera(const SchemaReader& r, const Json& v, const std::string& path) {
  r.only_keys(v, path, {"sensor_width_mm", "altitude_m", "focal_length_mm", "image_width_px"});
  CameraModel cam;
  cam.sensor_width_mm = r.positive_number(r.required(v, path, "sensor_width_mm"), path + "/sensor_width_mm");
  cam.altitude_m = r.positive_number(r.required(v, path, "altitude_m"), path + "/altitude_m");
  cam.focal_length_mm = r.positive_number(r.required(v, path, "focal_length_mm"), path + "/focal_length_mm");
  cam.image_width_px = r.positive_integer(r.required(v, path, "image_width_px"), path + "/image_width_px");
  return cam;
}

ImageEntry read_image(const SchemaReader& r, const Json& v, const std::string& path) {
  r.only_keys(v, path, {"id", "width", "height", "ground_truth", "detections"});
  ImageEntry img;
  img.id = r.string(r.required(v, path, "id"), path + "/id");
  const auto width = r.positive_integer(r.required(v, path, "width"), path + "/width");
  const auto height = r.positive_integer(r.required(v, path, "height"), path + "/height");
  if (width > kMaxCoordinate || height > kMaxCoordinate) r.fail(path, "image too large");
  img.width = static_cast<std::int32_t>(width);
  img.height = static_cast<std::int32_t>(height);

  if (const auto it = v.find("ground_truth"); it != v.end()) {
    const std::string gpath = path + "/ground_truth";
    if (!it->is_array()) r.fail(gpath, "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = gpath + "/" + std::to_string(i);
      const Json& e = (*it)[i];
      r.only_keys(e, p, {"mask_path", "type_code"});
      img.ground_truth.push_back({r.string(r.required(e, p, "mask_path"), p + "/mask_path"),
                                  r.string(r.required(e, p, "type_code"), p + "/type_code")});
    }
  }
  if (const auto it = v.find("detections"); it != v.end()) {
    const std::string dpath = path + "/detections";
    if (!it->is_array()) r.fail(dpath, "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string p = dpath + "/" + std::to_string(i);
      const Json& e = (*it)[i];
      r.only_keys(e, p, {"mask_path", "score"});
      DetectionEntry det;
      det.mask_path = r.string(r.required(e, p, "mask_path"), p + "/mask_path");
      const Json& score = r.required(e, p, "score");
      if (!score.is_number()) r.fail(p + "/score", "expected a number");
      det.score = score.get<double>();
      if (!(det.score >= 0.0 && det.score <= 1.0)) r.fail(p + "/score", "must lie in [0, 1]");
      img.detections.push_back(std::move(det));
    }
  }
  return img;
}

}  // namespace

GroundSampleDistance DatasetManifest::gsd() const {
  if (gsd_cm_per_px) return GroundSampleDistance(*gsd_cm_per_px);
  if (camera) return compute_gsd(*camera);
  throw Error(ErrorCode::GsdMissing, "manifest gives neither gsd_cm_per_px nor camera");
}

std::filesystem::path DatasetManifest::resolve(const std::string& mask_path) const {
  return base_dir / mask_path;
}

DatasetManifest parse_manifest(std::string_view json_text, const std::filesystem::path& base_dir,
                               std::string_view source) {
  const SchemaReader r{std::string(source)};
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    r.fail("", std::string("invalid JSON: ") + e.what());
  }
  r.only_keys(root, "", {"gsd_cm_per_px", "camera", "images"});

  DatasetManifest manifest;
  manifest.base_dir = base_dir;
  if (const auto it = root.find("gsd_cm_per_px"); it != root.end()) {
    manifest.gsd_cm_per_px = r.positive_number(*it, "/gsd_cm_per_px");
  }
  if (const auto it = root.find("camera"); it != root.end()) {
    manifest.camera = read_camera(r, *it, "/camera");
  }
  if (!manifest.gsd_cm_per_px && !manifest.camera) {
    throw Error(ErrorCode::GsdMissing,
                std::string(source) + ": manifest gives neither gsd_cm_per_px nor camera");
  }

  const Json& images = r.required(root, "", "images");
  if (!images.is_array()) r.fail("/images", "expected an array");
  std::set<std::string, std::less<>> ids;
  for (std::size_t i = 0; i < images.size(); ++i) {
    const std::string path = "/images/" + std::to_string(i);
    ImageEntry img = read_image(r, images[i], path);
    if (!ids.insert(img.id).second) r.fail(path + "/id", "duplicate image id '" + img.id + "'");
    manifest.images.push_back(std::move(img));
  }

  for (const ImageEntry& img : manifest.images) {
    auto check = [&](const std::string& mask_path) {
      const auto full = manifest.resolve(mask_path);
      if (!std::filesystem::is_regular_file(full)) {
        throw Error(ErrorCode::MissingMaskFile,
                    std::string(source) + ": image '" + img.id + "': " + full.string());
      }
    };
    for (const auto& g : img.ground_truth) check(g.mask_path);
    for (const auto& d : img.detections) check(d.mask_path);
  }
  return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  return parse_manifest(text, path.parent_path(), path.string());
}

std::string manifest_to_json(const DatasetManifest& manifest) {
  nlohmann::ordered_json root;
  if (manifest.gsd_cm_per_px) root["gsd_cm_per_px"] = *manifest.gsd_cm_per_px;
  if (manifest.camera) {
    const CameraModel& c = *manifest.camera;
    root["camera"] = {{"sensor_width_mm", c.sensor_width_mm},
                      {"altitude_m", c.altitude_m},
                      {"focal_length_mm", c.focal_length_mm},
                      {"image_width_px", c.image_width_px}};
  }
  root["images"] = nlohmann::ordered_json::array();
  for (const ImageEntry& img : manifest.images) {
    nlohmann::ordered_json j;
    j["id"] = img.id;
    j["width"] = img.width;
    j["height"] = img.height;
    j["ground_truth"] = nlohmann::ordered_json::array();
    for (const auto& g : img.ground_truth) {
      j["ground_truth"].push_back({{"mask_path", g.mask_path}, {"type_code", g.type_code}});
    }
    j["detections"] = nlohmann::ordered_json::array();
    for (const auto& d : img.detections) {
      j["detections"].push_back({{"mask_path", d.mask_path}, {"score", d.score}});
    }
    root["images"].push_back(std::move(j));
  }
  return root.dump(2) + "\n";
}

void save_manifest(const DatasetManifest& manifest, const std::filesystem::path& path) {
  write_text_file(path, manifest_to_json(manifest));
}

LoadedDataset load_dataset_masks(const DatasetManifest& manifest, Execution exec) {
  struct Job {
    const ImageEntry* image;
    std::string mask_path;
    bool is_detection;
    std::size_t slot;
  };
  std::vector<Job> jobs;
  LoadedDataset out;
  for (const ImageEntry& img : manifest.images) {
    for (const auto& g : img.ground_truth) {
      jobs.push_back({&img, g.mask_path, false, out.ground_truths.size()});
      out.ground_truths.push_back({img.id, PixelMask{}, g.type_code});
    }
    for (const auto& d : img.detections) {
      jobs.push_back({&img, d.mask_path, true, out.detections.size()});
      out.detections.push_back({img.id, PixelMask{}, d.score});
    }
  }

  std::vector<std::exception_ptr> failures(jobs.size());
  const long n = static_cast<long>(jobs.size());
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
  for (long k = 0; k < n; ++k) {
    const Job& job = jobs[k];
    try {
      const auto full = manifest.resolve(job.mask_path);
      PixelMask mask;
      try {
        mask = load_mask(full);
      } catch (const Error& e) {
        throw Error(e.code(), "image '" + job.image->id + "': " + e.detail());
      }
      if (mask.width() != job.image->width || mask.height() != job.image->height) {
        throw Error(ErrorCode::DimensionMismatch,
                    full.string() + " is " + std::to_string(mask.width()) + "x" +
                        std::to_string(mask.height()) + ", image '" + job.image->id + "' declares " +
                        std::to_string(job.image->width) + "x" + std::to_string(job.image->height));
      }
      if (mask.empty()) throw Error(ErrorCode::EmptyMask, full.string() + " has no foreground pixels");
      if (job.is_detection) {
        out.detections[job.slot].mask = std::move(mask);
      } else {
        out.ground_truths[job.slot].mask = std::move(mask);
      }
    } catch (...) {
      failures[k] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

}  // namespace apronid
