#include "apronid/report.hpp"

#include <fmt/format.h>

#include <map>
#include <numeric>

#include "apronid/error.hpp"
#include "apronid/photogrammetry.hpp"
#include "json.hpp"

namespace apronid {

EvalReport evaluate_records(const LoadedDataset& data, GroundSampleDistance gsd,
                            const TypeDatabase& db, Execution exec) {
  const auto& dets = data.detections;
  const auto& gts = data.ground_truths;
  for (const GroundTruthRecord& g : gts) {
    if (!db.find(g.type_code)) {
      throw Error(ErrorCode::UnknownCode,
                  "image '" + g.image_id + "': ground-truth type '" + g.type_code + "' not in database");
    }
  }

  EvalReport report;
  report.gsd_cm_per_px = gsd.cm_per_px();
  report.coco = coco_evaluate(dets, gts, exec);

  const MatchResult match = match_detections(dets, gts, kIdentificationIou, exec);
  report.true_positives = match.true_positives();
  report.false_positives = match.false_positives();
  report.false_negatives = match.false_negatives();

  std::vector<const PixelMask*> masks;
  for (const DetectionRecord& d : dets) masks.push_back(&d.mask);
  const std::vector<FarthestPair> pairs = batch_farthest_pairs(masks, exec);

  std::map<std::string, std::size_t> per_image_index;
  std::vector<std::pair<std::string, std::string>> labelled;
  std::map<std::string, std::vector<double>, std::less<>> lengths_by_type;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    DetectionOutcome out;
    out.image_id = dets[i].image_id;
    out.index = per_image_index[dets[i].image_id]++;
    out.score = dets[i].score;
    out.pixel_count = dets[i].mask.pixel_count();
    out.diameter_px = pairs[i].distance();
    out.length_m = length_m(out.diameter_px, gsd);
    out.area_m2 = surface_area_m2(out.pixel_count, gsd);
    out.predicted_code = classify_by_length(out.length_m, db);
    if (match.det_to_gt[i]) {
      const std::string& actual = gts[*match.det_to_gt[i]].type_code;
      out.actual_code = actual;
      out.iou = match.det_iou[i];
      labelled.emplace_back(actual, out.predicted_code);
      lengths_by_type[actual].push_back(out.length_m);
    }
    report.detections.push_back(std::move(out));
  }

  std::vector<double> accuracies;
  for (const AircraftType& t : db.entries()) {
    TypeAccuracy acc{t.code, t.full_name, t.actual_length_m, 0, std::nullopt, std::nullopt};
    if (const auto it = lengths_by_type.find(t.code); it != lengths_by_type.end()) {
      acc.n = it->second.size();
      acc.mean_length_m = mean_detected_length(it->second);
      acc.accuracy_pct = length_accuracy_pct(*acc.mean_length_m, t.actual_length_m);
      accuracies.push_back(*acc.accuracy_pct);
    }
    report.per_type.push_back(std::move(acc));
  }
  if (!accuracies.empty()) {
    report.average_accuracy_pct =
        std::accumulate(accuracies.begin(), accuracies.end(), 0.0) / static_cast<double>(accuracies.size());
  }
  report.confusion = build_confusion_matrix(labelled, db);
  return report;
}

EvalReport evaluate_dataset(const DatasetManifest& manifest, const TypeDatabase& db, Execution exec) {
  const GroundSampleDistance gsd = manifest.gsd();
  return evaluate_records(load_dataset_masks(manifest, exec), gsd, db, exec);
}

namespace {

template <typename T>
nlohmann::ordered_json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  using Json = nlohmann::ordered_json;
  Json root;
  root["version"] = kReportVersion;
  root["gsd_cm_per_px"] = report.gsd_cm_per_px;

  Json coco = Json::object();
  const auto values = report.coco.values();
  for (std::size_t i = 0; i < values.size(); ++i) coco[std::string(CocoMetrics::kNames[i])] = values[i];
  root["coco"] = std::move(coco);

  root["counts"] = {{"detections", report.detections.size()},
                    {"ground_truths", report.true_positives + report.false_negatives},
                    {"true_positives", report.true_positives},
                    {"false_positives", report.false_positives},
                    {"false_negatives", report.false_negatives}};

  Json per_type = Json::array();
  for (const TypeAccuracy& t : report.per_type) {
    per_type.push_back({{"code", t.code},
                        {"full_name", t.full_name},
                        {"actual_length_m", t.actual_length_m},
                        {"n", t.n},
                        {"mean_length_m", optional_json(t.mean_length_m)},
                        {"accuracy_pct", optional_json(t.accuracy_pct)}});
  }
  root["per_type"] = std::move(per_type);
  root["average_accuracy_pct"] = optional_json(report.average_accuracy_pct);

  Json counts = Json::array();
  for (std::size_t r = 0; r < report.confusion.size(); ++r) counts.push_back(report.confusion.row(r));
  root["confusion_matrix"] = {{"codes", report.confusion.codes()}, {"counts", std::move(counts)}};

  Json dets = Json::array();
  for (const DetectionOutcome& d : report.detections) {
    dets.push_back({{"image_id", d.image_id},
                    {"index", d.index},
                    {"score", d.score},
                    {"pixel_count", d.pixel_count},
                    {"diameter_px", d.diameter_px},
                    {"length_m", d.length_m},
                    {"area_m2", d.area_m2},
                    {"predicted", d.predicted_code},
                    {"actual", optional_json(d.actual_code)},
                    {"iou", d.iou}});
  }
  root["detections"] = std::move(dets);
  return root.dump(2) + "\n";
}

std::string confusion_to_csv(const ConfusionMatrix& matrix) {
  std::string out = "actual\\predicted";
  for (const std::string& c : matrix.codes()) out += "," + c;
  out += "\n";
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    out += matrix.codes()[r];
    for (std::size_t c = 0; c < matrix.size(); ++c) out += "," + std::to_string(matrix.at(r, c));
    out += "\n";
  }
  return out;
}

std::string report_summary(const EvalReport& report) {
  std::string out = fmt::format("GSD: {:.2f} cm/px\n\nCOCO metrics\n", report.gsd_cm_per_px);
  const auto values = report.coco.values();
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += fmt::format("  {:<10} = {:.3f}\n", CocoMetrics::kNames[i], values[i]);
  }
  out += fmt::format("\nDetections: {}  TP: {}  FP: {}  FN: {}\n", report.detections.size(),
                     report.true_positives, report.false_positives, report.false_negatives);

  out += "\nLength accuracy\n";
  out += fmt::format("  {:<8} {:>9} {:>9} {:>5} {:>9}\n", "type", "actual_m", "mean_m", "n", "accuracy");
  for (const TypeAccuracy& t : report.per_type) {
    out += fmt::format("  {:<8} {:>9.2f} {:>9} {:>5} {:>9}\n", t.code, t.actual_length_m,
                       t.mean_length_m ? fmt::format("{:.2f}", *t.mean_length_m) : "-", t.n,
                       t.accuracy_pct ? std::to_string(*t.accuracy_pct) : "-");
  }
  out += fmt::format("  average accuracy: {}\n",
                     report.average_accuracy_pct ? fmt::format("{:.0f}", *report.average_accuracy_pct) : "-");

  out += "\nConfusion matrix (rows actual, columns predicted)\n";
  out += fmt::format("  {:<8}", "");
  for (const std::string& c : report.confusion.codes()) out += fmt::format(" {:>6}", c);
  out += "\n";
  for (std::size_t r = 0; r < report.confusion.size(); ++r) {
    out += fmt::format("  {:<8}", report.confusion.codes()[r]);
    for (std::size_t c = 0; c < report.confusion.size(); ++c) {
      out += fmt::format(" {:>6}", report.confusion.at(r, c));
    }
    out += "\n";
  }
  return out;
}

void write_report(const EvalReport& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string() + ": " + ec.message());
  write_text_file(dir / "eval_report.json", report_to_json(report));
  write_text_file(dir / "confusion_matrix.csv", confusion_to_csv(report.confusion));
}

}  // namespace apronid
