#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "apronid/execution.hpp"
#include "apronid/geometry.hpp"
#include "apronid/identification.hpp"

namespace apronid {

struct DetectionRecord {
  std::string image_id;
  PixelMask mask;
  double score = 0.0;
};

struct GroundTruthRecord {
  std::string image_id;
  PixelMask mask;
  std::string type_code;
};

// ---------------------------------------------------------------------------
// Overlap

// |A and B| over two row-major sorted foreground sets. Throws DimensionMismatch.
std::size_t intersection_count(const PixelMask& a, const PixelMask& b);

// |A and B| / |A or B|; 0 when both masks are empty. Throws DimensionMismatch.
double mask_iou(const PixelMask& a, const PixelMask& b);

// Dense rows x cols IoU table, row-major.
struct IouMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

IouMatrix iou_matrix(std::span<const PixelMask* const> rows, std::span<const PixelMask* const> cols,
                     Execution exec = Execution::parallel);

// ---------------------------------------------------------------------------
// Greedy matching

// Indices refer to the input spans. Detections without a ground truth are
// false positives, ground truths without a detection are false negatives.
struct MatchResult {
  std::vector<std::optional<std::size_t>> det_to_gt;
  std::vector<std::optional<std::size_t>> gt_to_det;
  std::vector<double> det_iou;  // IoU with the matched ground truth, else 0

  std::size_t true_positives() const;
  std::size_t false_positives() const;
  std::size_t false_negatives() const;
};

// Per image: detections in descending score order (input order on ties) each
// take the unmatched ground truth of highest IoU, provided IoU >= threshold.
// Equal IoUs go to the earlier ground truth.
MatchResult match_detections(std::span<const DetectionRecord> dets,
                             std::span<const GroundTruthRecord> gts, double iou_threshold,
                             Execution exec = Execution::parallel);

// ---------------------------------------------------------------------------
// COCO-style detection metrics

// Averaged over IoU thresholds 0.50:0.05:0.95 unless the name says otherwise.
// -1 marks a metric whose ground-truth bucket is empty.
struct CocoMetrics {
  double ap = -1.0;
  double ap50 = -1.0;
  double ap75 = -1.0;
  double ap_small = -1.0;
  double ap_medium = -1.0;
  double ap_large = -1.0;
  double ar_max1 = -1.0;
  double ar_max10 = -1.0;
  double ar_max100 = -1.0;
  double ar_small = -1.0;
  double ar_medium = -1.0;
  double ar_large = -1.0;

  static constexpr std::array<std::string_view, 12> kNames = {
      "ap",      "ap50",     "ap75",      "ap_small", "ap_medium", "ap_large",
      "ar_max1", "ar_max10", "ar_max100", "ar_small", "ar_medium", "ar_large"};

  std::array<double, 12> values() const {
    return {ap,      ap50,     ap75,      ap_small, ap_medium, ap_large,
            ar_max1, ar_max10, ar_max100, ar_small, ar_medium, ar_large};
  }
};

inline constexpr std::size_t kIouThresholdCount = 10;
inline constexpr std::size_t kRecallSampleCount = 101;

// Threshold i is (50 + 5 i) / 100.
double coco_iou_threshold(std::size_t i);

enum class AreaBucket { all, small, medium, large };

// Ground-truth pixel-count buckets: small < 32^2, medium [32^2, 96^2], large > 96^2.
bool in_bucket(std::size_t pixel_count, AreaBucket bucket) noexcept;

struct CocoDetail {
  CocoMetrics metrics;
  // All areas, 100 detections per image, one entry per IoU threshold; -1 when
  // there are no ground truths.
  std::array<double, kIouThresholdCount> ap_by_threshold{};
  std::array<double, kIouThresholdCount> recall_by_threshold{};
};

CocoDetail coco_evaluate_detailed(std::span<const DetectionRecord> dets,
                                  std::span<const GroundTruthRecord> gts,
                                  Execution exec = Execution::parallel);

CocoMetrics coco_evaluate(std::span<const DetectionRecord> dets,
                          std::span<const GroundTruthRecord> gts,
                          Execution exec = Execution::parallel);

// ---------------------------------------------------------------------------
// Length accuracy and confusion

// Arithmetic mean of the per-image detected lengths of one type. Throws EmptySample.
double mean_detected_length(std::span<const double> lengths);

// round(max(0, 100 (1 - |mean - actual| / actual))). Throws NonPositiveActual.
int length_accuracy_pct(double mean_detected_m, double actual_m);

// Rows are actual types, columns predicted types, both in database order.
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::vector<std::string> codes);

  const std::vector<std::string>& codes() const noexcept { return codes_; }
  std::size_t size() const noexcept { return codes_.size(); }
  std::int64_t at(std::size_t actual, std::size_t predicted) const {
    return counts_[actual * codes_.size() + predicted];
  }
  std::vector<std::int64_t> row(std::size_t actual) const;
  std::int64_t total() const;

  void add(std::size_t actual, std::size_t predicted) { ++counts_[actual * codes_.size() + predicted]; }

 private:
  std::vector<std::string> codes_;
  std::vector<std::int64_t> counts_;
};

// Throws UnknownCode for a code missing from the database.
ConfusionMatrix build_confusion_matrix(std::span<const std::pair<std::string, std::string>> pairs,
                                       const TypeDatabase& db);

}  // namespace apronid
