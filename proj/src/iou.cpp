#include <algorithm>
#include <numeric>
#include <string>

#include "apronid/error.hpp"
#include "apronid/evaluation.hpp"
#include "matching_internal.hpp"

namespace apronid {

namespace {

void require_same_shape(const PixelMask& a, const PixelMask& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(a.width()) + "x" + std::to_string(a.height()) + " vs " +
                    std::to_string(b.width()) + "x" + std::to_string(b.height()));
  }
}

std::size_t count_common(std::span<const PixelPoint> a, std::span<const PixelPoint> b) noexcept {
  std::size_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

double iou_unchecked(const PixelMask& a, const PixelMask& b) noexcept {
  const std::size_t inter = count_common(a.points(), b.points());
  const std::size_t uni = a.pixel_count() + b.pixel_count() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace

std::size_t intersection_count(const PixelMask& a, const PixelMask& b) {
  require_same_shape(a, b);
  return count_common(a.points(), b.points());
}

double mask_iou(const PixelMask& a, const PixelMask& b) {
  require_same_shape(a, b);
  return iou_unchecked(a, b);
}

IouMatrix iou_matrix(std::span<const PixelMask* const> rows, std::span<const PixelMask* const> cols,
                     Execution exec) {
  for (const PixelMask* r : rows) {
    for (const PixelMask* c : cols) require_same_shape(*r, *c);
  }
  IouMatrix m{rows.size(), cols.size(), std::vector<double>(rows.size() * cols.size(), 0.0)};
  const long total = static_cast<long>(m.values.size());
  if (exec == Execution::serial) {
    for (long k = 0; k < total; ++k) {
      m.values[k] = iou_unchecked(*rows[k / m.cols], *cols[k % m.cols]);
    }
  } else {
#pragma omp parallel for schedule(dynamic, 4)
    for (long k = 0; k < total; ++k) {
      m.values[k] = iou_unchecked(*rows[k / m.cols], *cols[k % m.cols]);
    }
  }
  return m;
}

namespace detail {

std::map<std::string, ImageGroup> group_by_image(std::span<const DetectionRecord> dets,
                                                 std::span<const GroundTruthRecord> gts) {
  std::map<std::string, ImageGroup> groups;
  for (std::size_t i = 0; i < dets.size(); ++i) groups[dets[i].image_id].dets.push_back(i);
  for (std::size_t i = 0; i < gts.size(); ++i) groups[gts[i].image_id].gts.push_back(i);
  return groups;
}

std::vector<std::size_t> score_order(std::span<const DetectionRecord> dets,
                                     std::span<const std::size_t> indices) {
  std::vector<std::size_t> order(indices.begin(), indices.end());
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dets[a].score > dets[b].score; });
  return order;
}

void greedy_match(const IouMatrix& ious, std::span<const std::size_t> gt_order,
                  std::span<const char> gt_ignore, double threshold,
                  std::vector<long>& det_match, std::vector<long>& gt_match) {
  det_match.assign(ious.rows, -1);
  gt_match.assign(ious.cols, -1);
  for (std::size_t d = 0; d < ious.rows; ++d) {
    long best = -1;
    double best_iou = 0.0;
    for (std::size_t g : gt_order) {
      if (gt_match[g] >= 0) continue;
      // Once a regular ground truth is held, ignored ones cannot replace it.
      if (best >= 0 && !gt_ignore[best] && gt_ignore[g]) break;
      const double iou = ious.at(d, g);
      if (iou < threshold) continue;
      if (best >= 0 && iou <= best_iou) continue;
      best = static_cast<long>(g);
      best_iou = iou;
    }
    if (best >= 0) {
      det_match[d] = best;
      gt_match[best] = static_cast<long>(d);
    }
  }
}

void check_same_image_dimensions(std::span<const DetectionRecord> dets,
                                 std::span<const GroundTruthRecord> gts,
                                 const std::map<std::string, ImageGroup>& groups) {
  for (const auto& [id, group] : groups) {
    const PixelMask* first = nullptr;
    auto check = [&](const PixelMask& m) {
      if (!first) {
        first = &m;
      } else if (m.width() != first->width() || m.height() != first->height()) {
        throw Error(ErrorCode::DimensionMismatch, "masks of image '" + id + "' differ in size");
      }
    };
    for (std::size_t i : group.dets) check(dets[i].mask);
    for (std::size_t i : group.gts) check(gts[i].mask);
  }
}

}  // namespace detail

std::size_t MatchResult::true_positives() const {
  return static_cast<std::size_t>(
      std::count_if(det_to_gt.begin(), det_to_gt.end(), [](const auto& m) { return m.has_value(); }));
}

std::size_t MatchResult::false_positives() const { return det_to_gt.size() - true_positives(); }

std::size_t MatchResult::false_negatives() const {
  return static_cast<std::size_t>(
      std::count_if(gt_to_det.begin(), gt_to_det.end(), [](const auto& m) { return !m.has_value(); }));
}

MatchResult match_detections(std::span<const DetectionRecord> dets,
                             std::span<const GroundTruthRecord> gts, double iou_threshold,
                             Execution exec) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw Error(ErrorCode::SchemaError, "IoU threshold must lie in (0, 1]");
  }
  const auto groups = detail::group_by_image(dets, gts);
  detail::check_same_image_dimensions(dets, gts, groups);

  std::vector<const detail::ImageGroup*> images;
  for (const auto& [id, group] : groups) images.push_back(&group);

  MatchResult result;
  result.det_to_gt.resize(dets.size());
  result.gt_to_det.resize(gts.size());
  result.det_iou.assign(dets.size(), 0.0);

  const long n_images = static_cast<long>(images.size());
  // Each image writes a disjoint set of slots.
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel)
  for (long k = 0; k < n_images; ++k) {
    const detail::ImageGroup& group = *images[k];
    const std::vector<std::size_t> order = detail::score_order(dets, group.dets);
    std::vector<const PixelMask*> rows;
    std::vector<const PixelMask*> cols;
    for (std::size_t d : order) rows.push_back(&dets[d].mask);
    for (std::size_t g : group.gts) cols.push_back(&gts[g].mask);
    const IouMatrix ious = iou_matrix(rows, cols, Execution::serial);

    std::vector<std::size_t> gt_order(cols.size());
    std::iota(gt_order.begin(), gt_order.end(), std::size_t{0});
    const std::vector<char> no_ignore(cols.size(), 0);
    std::vector<long> det_match;
    std::vector<long> gt_match;
    detail::greedy_match(ious, gt_order, no_ignore, iou_threshold, det_match, gt_match);

    for (std::size_t r = 0; r < order.size(); ++r) {
      if (det_match[r] < 0) continue;
      const std::size_t det = order[r];
      const std::size_t gt = group.gts[static_cast<std::size_t>(det_match[r])];
      result.det_to_gt[det] = gt;
      result.gt_to_det[gt] = det;
      result.det_iou[det] = ious.at(r, static_cast<std::size_t>(det_match[r]));
    }
  }
  return result;
}

}  // namespace apronid
