#pragma once

// Helpers shared by greedy matching and the COCO evaluator.

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "apronid/evaluation.hpp"

namespace apronid::detail {

struct ImageGroup {
  std::vector<std::size_t> dets;
  std::vector<std::size_t> gts;
};

// Keyed by image id, so iteration order is deterministic.
std::map<std::string, ImageGroup> group_by_image(std::span<const DetectionRecord> dets,
                                                 std::span<const GroundTruthRecord> gts);

// Indices into `dets` sorted by descending score; stable on ties.
std::vector<std::size_t> score_order(std::span<const DetectionRecord> dets,
                                     std::span<const std::size_t> indices);

// Greedy assignment for one image. Rows of `ious` follow `det_order`, columns
// follow gt positions 0..cols-1. `gt_order` lists columns with non-ignored
// ground truths first. Fills det_match/gt_match with partner positions or -1.
void greedy_match(const IouMatrix& ious, std::span<const std::size_t> gt_order,
                  std::span<const char> gt_ignore, double threshold,
                  std::vector<long>& det_match, std::vector<long>& gt_match);

void check_same_image_dimensions(std::span<const DetectionRecord> dets,
                                 std::span<const GroundTruthRecord> gts,
                                 const std::map<std::string, ImageGroup>& groups);

}  // namespace apronid::detail
