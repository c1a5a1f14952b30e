#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "apronid/dataio.hpp"
#include "apronid/evaluation.hpp"
#include "apronid/identification.hpp"

namespace apronid {

inline constexpr const char* kReportVersion = "0.1.0";

// Detections are paired with ground truths at this IoU before their measured
// length is compared against the annotated type.
inline constexpr double kIdentificationIou = 0.5;

struct TypeAccuracy {
  std::string code;
  std::string full_name;
  double actual_length_m = 0.0;
  std::size_t n = 0;  // matched detections of this actual type
  std::optional<double> mean_length_m;
  std::optional<int> accuracy_pct;
};

struct DetectionOutcome {
  std::string image_id;
  std::size_t index = 0;  // position within the image's detection list
  double score = 0.0;
  std::size_t pixel_count = 0;
  double diameter_px = 0.0;
  double length_m = 0.0;
  double area_m2 = 0.0;
  std::string predicted_code;
  std::optional<std::string> actual_code;  // empty for false positives
  double iou = 0.0;
};

struct EvalReport {
  double gsd_cm_per_px = 0.0;
  CocoMetrics coco;
  std::vector<TypeAccuracy> per_type;  // database order
  // Plain mean of the per-type accuracies that have data.
  std::optional<double> average_accuracy_pct;
  ConfusionMatrix confusion{{}};
  std::size_t true_positives = 0;
  std::size_t false_positives = 0;
  std::size_t false_negatives = 0;
  std::vector<DetectionOutcome> detections;
};

// Measures every detection (diameter via hull + rotating calipers, length and
// area via the manifest GSD), names it by nearest length, pairs it with ground
// truth at kIdentificationIou and aggregates COCO metrics, per-type accuracy
// and the confusion matrix. Throws UnknownCode for ground-truth types missing
// from `db`.
EvalReport evaluate_records(const LoadedDataset& data, GroundSampleDistance gsd,
                            const TypeDatabase& db, Execution exec = Execution::parallel);

// Loads masks referenced by `manifest`, then evaluate_records.
EvalReport evaluate_dataset(const DatasetManifest& manifest, const TypeDatabase& db,
                            Execution exec = Execution::parallel);

std::string report_to_json(const EvalReport& report);

// Header row "actual\predicted,<codes...>", then one row per actual type.
std::string confusion_to_csv(const ConfusionMatrix& matrix);

// Human-readable summary: COCO metrics to 3 decimals, lengths to 0.01 m,
// accuracies as integers.
std::string report_summary(const EvalReport& report);

// Writes eval_report.json and confusion_matrix.csv into `dir` (created if
// needed). Throws IoError.
void write_report(const EvalReport& report, const std::filesystem::path& dir);

}  // namespace apronid
