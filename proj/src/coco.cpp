#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>

#include "apronid/evaluation.hpp"
#include "matching_internal.hpp"

namespace apronid {

namespace {

constexpr std::size_t kMaxDetections = 100;
constexpr std::array<AreaBucket, 4> kBuckets = {AreaBucket::all, AreaBucket::small,
                                                AreaBucket::medium, AreaBucket::large};
constexpr std::array<std::size_t, 3> kDetectionCaps = {1, 10, 100};

// Matching outcome of one image for one (bucket, threshold) pair. Entries
// follow the image's detections in descending score order.
struct ImageOutcome {
  std::vector<char> matched;
  std::vector<char> ignored;
};

struct ImageEval {
  std::vector<double> scores;  // descending, truncated to kMaxDetections
  std::array<std::size_t, kBuckets.size()> regular_gts{};
  std::array<std::array<ImageOutcome, kIouThresholdCount>, kBuckets.size()> outcomes;
};

ImageEval evaluate_image(std::span<const DetectionRecord> dets, std::span<const GroundTruthRecord> gts,
                         const detail::ImageGroup& group) {
  ImageEval eval;
  std::vector<std::size_t> order = detail::score_order(dets, group.dets);
  if (order.size() > kMaxDetections) order.resize(kMaxDetections);

  std::vector<const PixelMask*> rows;
  std::vector<const PixelMask*> cols;
  for (std::size_t d : order) {
    rows.push_back(&dets[d].mask);
    eval.scores.push_back(dets[d].score);
  }
  for (std::size_t g : group.gts) cols.push_back(&gts[g].mask);
  const IouMatrix ious = iou_matrix(rows, cols, Execution::serial);

  for (std::size_t b = 0; b < kBuckets.size(); ++b) {
    std::vector<char> gt_ignore(cols.size());
    for (std::size_t g = 0; g < cols.size(); ++g) {
      gt_ignore[g] = in_bucket(cols[g]->pixel_count(), kBuckets[b]) ? 0 : 1;
    }
    std::vector<std::size_t> gt_order(cols.size());
    std::iota(gt_order.begin(), gt_order.end(), std::size_t{0});
    std::stable_partition(gt_order.begin(), gt_order.end(),
                          [&](std::size_t g) { return !gt_ignore[g]; });
    eval.regular_gts[b] = static_cast<std::size_t>(std::count(gt_ignore.begin(), gt_ignore.end(), 0));

    for (std::size_t t = 0; t < kIouThresholdCount; ++t) {
      std::vector<long> det_match;
      std::vector<long> gt_match;
      detail::greedy_match(ious, gt_order, gt_ignore, coco_iou_threshold(t), det_match, gt_match);
      ImageOutcome& out = eval.outcomes[b][t];
      out.matched.resize(rows.size());
      out.ignored.resize(rows.size());
      for (std::size_t d = 0; d < rows.size(); ++d) {
        if (det_match[d] >= 0) {
          out.matched[d] = 1;
          out.ignored[d] = gt_ignore[static_cast<std::size_t>(det_match[d])];
        } else {
          out.matched[d] = 0;
          out.ignored[d] = in_bucket(rows[d]->pixel_count(), kBuckets[b]) ? 0 : 1;
        }
      }
    }
  }
  return eval;
}

struct CurveSummary {
  double ap = -1.0;
  double recall = -1.0;
};

// Precision is made monotone from the right and sampled at recall k/100 for
// k = 0..100; the recall comparison is exact integer arithmetic.
CurveSummary summarize_curve(const std::vector<ImageEval>& images, std::size_t bucket,
                             std::size_t threshold, std::size_t cap) {
  struct Entry {
    double score;
    char matched;
  };
  std::vector<Entry> entries;
  std::int64_t regular = 0;
  for (const ImageEval& img : images) {
    regular += static_cast<std::int64_t>(img.regular_gts[bucket]);
    const ImageOutcome& out = img.outcomes[bucket][threshold];
    const std::size_t n = std::min(cap, img.scores.size());
    for (std::size_t d = 0; d < n; ++d) {
      if (!out.ignored[d]) entries.push_back({img.scores[d], out.matched[d]});
    }
  }
  if (regular == 0) return {};
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.score > b.score; });

  const std::size_t n = entries.size();
  std::vector<std::int64_t> tp(n);
  std::vector<double> precision(n);
  std::int64_t tps = 0;
  for (std::size_t i = 0; i < n; ++i) {
    tps += entries[i].matched ? 1 : 0;
    tp[i] = tps;
    precision[i] = static_cast<double>(tps) / static_cast<double>(i + 1);
  }
  for (std::size_t i = n; i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }

  CurveSummary summary;
  summary.recall = n == 0 ? 0.0 : static_cast<double>(tps) / static_cast<double>(regular);
  double sum = 0.0;
  std::size_t i = 0;
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(kRecallSampleCount); ++k) {
    while (i < n && 100 * tp[i] < k * regular) ++i;
    if (i < n) sum += precision[i];
  }
  summary.ap = sum / static_cast<double>(kRecallSampleCount);
  return summary;
}

double mean_valid(std::span<const double> values) {
  double sum = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    if (v > -1.0) {
      sum += v;
      ++n;
    }
  }
  return n == 0 ? -1.0 : sum / static_cast<double>(n);
}

}  // namespace

double coco_iou_threshold(std::size_t i) { return static_cast<double>(50 + 5 * i) / 100.0; }

bool in_bucket(std::size_t pixel_count, AreaBucket bucket) noexcept {
  constexpr std::size_t kSmall = 32 * 32;
  constexpr std::size_t kLarge = 96 * 96;
  switch (bucket) {
    case AreaBucket::all: return true;
    case AreaBucket::small: return pixel_count < kSmall;
    case AreaBucket::medium: return pixel_count >= kSmall && pixel_count <= kLarge;
    case AreaBucket::large: return pixel_count > kLarge;
  }
  return false;
}

CocoDetail coco_evaluate_detailed(std::span<const DetectionRecord> dets,
                                  std::span<const GroundTruthRecord> gts, Execution exec) {
  const auto groups = detail::group_by_image(dets, gts);
  detail::check_same_image_dimensions(dets, gts, groups);
  std::vector<const detail::ImageGroup*> order;
  for (const auto& [id, group] : groups) order.push_back(&group);

  std::vector<ImageEval> images(order.size());
  const long n_images = static_cast<long>(order.size());
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
  for (long k = 0; k < n_images; ++k) {
    images[k] = evaluate_image(dets, gts, *order[k]);
  }

  // curves[bucket][threshold][cap]
  std::array<std::array<std::array<CurveSummary, kDetectionCaps.size()>, kIouThresholdCount>,
             kBuckets.size()>
      curves;
  constexpr long kCurveCount = static_cast<long>(kBuckets.size() * kIouThresholdCount * kDetectionCaps.size());
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
  for (long c = 0; c < kCurveCount; ++c) {
    const std::size_t cap = static_cast<std::size_t>(c) % kDetectionCaps.size();
    const std::size_t t = (static_cast<std::size_t>(c) / kDetectionCaps.size()) % kIouThresholdCount;
    const std::size_t b = static_cast<std::size_t>(c) / (kDetectionCaps.size() * kIouThresholdCount);
    curves[b][t][cap] = summarize_curve(images, b, t, kDetectionCaps[cap]);
  }

  auto ap_over_thresholds = [&](std::size_t b) {
    std::array<double, kIouThresholdCount> v{};
    for (std::size_t t = 0; t < kIouThresholdCount; ++t) v[t] = curves[b][t][2].ap;
    return mean_valid(v);
  };
  auto recall_over_thresholds = [&](std::size_t b, std::size_t cap) {
    std::array<double, kIouThresholdCount> v{};
    for (std::size_t t = 0; t < kIouThresholdCount; ++t) v[t] = curves[b][t][cap].recall;
    return mean_valid(v);
  };

  CocoDetail detail;
  CocoMetrics& m = detail.metrics;
  m.ap = ap_over_thresholds(0);
  m.ap50 = curves[0][0][2].ap;
  m.ap75 = curves[0][5][2].ap;
  m.ap_small = ap_over_thresholds(1);
  m.ap_medium = ap_over_thresholds(2);
  m.ap_large = ap_over_thresholds(3);
  m.ar_max1 = recall_over_thresholds(0, 0);
  m.ar_max10 = recall_over_thresholds(0, 1);
  m.ar_max100 = recall_over_thresholds(0, 2);
  m.ar_small = recall_over_thresholds(1, 2);
  m.ar_medium = recall_over_thresholds(2, 2);
  m.ar_large = recall_over_thresholds(3, 2);
  for (std::size_t t = 0; t < kIouThresholdCount; ++t) {
    detail.ap_by_threshold[t] = curves[0][t][2].ap;
    detail.recall_by_threshold[t] = curves[0][t][2].recall;
  }
  return detail;
}

CocoMetrics coco_evaluate(std::span<const DetectionRecord> dets,
                          std::span<const GroundTruthRecord> gts, Execution exec) {
  return coco_evaluate_detailed(dets, gts, exec).metrics;
}

}  // namespace apronid
