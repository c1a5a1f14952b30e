#include <gtest/gtest.h>

#include <random>

#include "apronid/error.hpp"
#include "apronid/evaluation.hpp"
#include "oracles.hpp"

using namespace apronid;

namespace {

PixelMask block(std::int32_t w, std::int32_t h, std::int32_t x0, std::int32_t y0, std::int32_t bw, std::int32_t bh) {
  std::vector<PixelPoint> pts;
  for (std::int32_t y = y0; y < y0 + bh; ++y)
    for (std::int32_t x = x0; x < x0 + bw; ++x) pts.push_back({x, y});
  return PixelMask::from_points(w, h, pts);
}

// |A and B| / |A or B| from two 0/1 rasters.
double raster_iou(const PixelMask& a, const PixelMask& b) {
  const auto ra = a.to_raster(), rb = b.to_raster();
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    inter += ra[i] && rb[i];
    uni += ra[i] || rb[i];
  }
  return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::IoError;
}

}  // namespace

TEST(MaskIou, Examples) {
  const auto a = block(4, 4, 0, 0, 2, 2);
  EXPECT_DOUBLE_EQ(mask_iou(a, a), 1.0);
  EXPECT_DOUBLE_EQ(mask_iou(a, block(4, 4, 2, 2, 2, 2)), 0.0);
  EXPECT_DOUBLE_EQ(mask_iou(a, block(4, 4, 1, 0, 2, 2)), 1.0 / 3.0);
  EXPECT_EQ(intersection_count(a, block(4, 4, 1, 0, 2, 2)), 2u);
  EXPECT_DOUBLE_EQ(mask_iou(PixelMask(4, 4), PixelMask(4, 4)), 0.0);
  EXPECT_EQ(code_of([&] { mask_iou(a, PixelMask(5, 4)); }), ErrorCode::DimensionMismatch);
}

TEST(MaskIou, RandomAgainstRasterCount) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto a = PixelMask::from_points(40, 30, oracle::random_blob(rng, 40, 30));
    const auto b = PixelMask::from_points(40, 30, oracle::random_blob(rng, 40, 30));
    const double iou = mask_iou(a, b);
    EXPECT_DOUBLE_EQ(iou, raster_iou(a, b));
    EXPECT_DOUBLE_EQ(iou, mask_iou(b, a));
    EXPECT_GE(iou, 0.0);
    EXPECT_LE(iou, 1.0);
  }
}

TEST(IouMatrix, SerialMatchesParallelAndPairwise) {
  std::mt19937_64 rng(2);
  std::vector<PixelMask> rows, cols;
  for (int i = 0; i < 23; ++i) rows.push_back(PixelMask::from_points(32, 32, oracle::random_blob(rng, 32, 32)));
  for (int i = 0; i < 17; ++i) cols.push_back(PixelMask::from_points(32, 32, oracle::random_blob(rng, 32, 32)));
  std::vector<const PixelMask*> r, c;
  for (auto& m : rows) r.push_back(&m);
  for (auto& m : cols) c.push_back(&m);
  const auto s = iou_matrix(r, c, Execution::serial);
  const auto p = iou_matrix(r, c, Execution::parallel);
  ASSERT_EQ(s.rows, 23u);
  ASSERT_EQ(s.cols, 17u);
  EXPECT_EQ(s.values, p.values);
  for (std::size_t i = 0; i < s.rows; ++i)
    for (std::size_t j = 0; j < s.cols; ++j) EXPECT_DOUBLE_EQ(s.at(i, j), raster_iou(rows[i], cols[j]));
  PixelMask odd(31, 32);
  c.push_back(&odd);
  EXPECT_EQ(code_of([&] { iou_matrix(r, c); }), ErrorCode::DimensionMismatch);
}

TEST(Matching, ThresholdDecidesTpOrFp) {
  // 10-pixel ground truth, 6-pixel detection inside it: IoU 0.6.
  std::vector<GroundTruthRecord> gts = {{"a", block(10, 1, 0, 0, 10, 1), "X"}};
  std::vector<DetectionRecord> dets = {{"a", block(10, 1, 0, 0, 6, 1), 0.9}};
  auto m = match_detections(dets, gts, 0.5);
  EXPECT_EQ(m.true_positives(), 1u);
  EXPECT_EQ(m.false_positives(), 0u);
  EXPECT_EQ(m.false_negatives(), 0u);
  EXPECT_DOUBLE_EQ(m.det_iou[0], 0.6);
  m = match_detections(dets, gts, 0.75);
  EXPECT_EQ(m.true_positives(), 0u);
  EXPECT_EQ(m.false_positives(), 1u);
  EXPECT_EQ(m.false_negatives(), 1u);
  EXPECT_FALSE(m.det_to_gt[0].has_value());
}

TEST(Matching, HigherScoreWins) {
  std::vector<GroundTruthRecord> gts = {{"a", block(8, 8, 0, 0, 4, 4), "X"}};
  std::vector<DetectionRecord> dets = {{"a", block(8, 8, 0, 0, 4, 3), 0.8},
                                       {"a", block(8, 8, 0, 1, 4, 3), 0.9}};
  const auto m = match_detections(dets, gts, 0.5);
  EXPECT_EQ(m.det_to_gt[1], 0u);
  EXPECT_FALSE(m.det_to_gt[0].has_value());
  EXPECT_EQ(m.gt_to_det[0], 1u);
  EXPECT_EQ(m.true_positives(), 1u);
  EXPECT_EQ(m.false_positives(), 1u);
}

TEST(Matching, EqualScoresKeepInputOrderAndEqualIouTakesFirstGt) {
  std::vector<GroundTruthRecord> gts = {{"a", block(8, 1, 0, 0, 2, 1), "X"}, {"a", block(8, 1, 2, 0, 2, 1), "Y"}};
  // Detection covers both ground truths equally (IoU 0.5 each).
  std::vector<DetectionRecord> dets = {{"a", block(8, 1, 0, 0, 4, 1), 0.7}, {"a", block(8, 1, 0, 0, 4, 1), 0.7}};
  const auto m = match_detections(dets, gts, 0.5);
  EXPECT_EQ(m.det_to_gt[0], 0u);
  EXPECT_EQ(m.det_to_gt[1], 1u);
}

TEST(Matching, ImagesAreIndependent) {
  std::vector<GroundTruthRecord> gts = {{"b", block(4, 4, 0, 0, 2, 2), "X"}, {"a", block(4, 4, 0, 0, 2, 2), "X"}};
  std::vector<DetectionRecord> dets = {{"a", block(4, 4, 0, 0, 2, 2), 0.5}, {"c", block(4, 4, 0, 0, 2, 2), 0.9}};
  const auto m = match_detections(dets, gts, 0.5);
  EXPECT_EQ(m.det_to_gt[0], 1u);
  EXPECT_FALSE(m.det_to_gt[1].has_value());
  EXPECT_EQ(m.false_negatives(), 1u);
}

TEST(Matching, NeverDoubleAssignsAndSerialEqualsParallel) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> score(0, 1);
  std::vector<GroundTruthRecord> gts;
  std::vector<DetectionRecord> dets;
  for (int img = 0; img < 12; ++img) {
    const std::string id = "img" + std::to_string(img);
    for (int g = 0; g < 5; ++g) gts.push_back({id, PixelMask::from_points(24, 24, oracle::random_blob(rng, 24, 24)), "X"});
    for (int d = 0; d < 8; ++d)
      dets.push_back({id, PixelMask::from_points(24, 24, oracle::random_blob(rng, 24, 24)), score(rng)});
  }
  for (double t : {0.05, 0.2, 0.5}) {
    const auto s = match_detections(dets, gts, t, Execution::serial);
    const auto p = match_detections(dets, gts, t, Execution::parallel);
    EXPECT_EQ(s.det_to_gt, p.det_to_gt);
    std::vector<int> used(gts.size());
    for (std::size_t d = 0; d < dets.size(); ++d) {
      if (!s.det_to_gt[d]) continue;
      const std::size_t g = *s.det_to_gt[d];
      EXPECT_EQ(++used[g], 1);
      EXPECT_EQ(s.gt_to_det[g], d);
      EXPECT_EQ(gts[g].image_id, dets[d].image_id);
      EXPECT_GE(s.det_iou[d], t);
    }
    EXPECT_EQ(s.true_positives() + s.false_positives(), dets.size());
    EXPECT_EQ(s.true_positives() + s.false_negatives(), gts.size());
  }
}

TEST(Matching, ThresholdValidation) {
  std::vector<GroundTruthRecord> gts;
  std::vector<DetectionRecord> dets;
  EXPECT_EQ(code_of([&] { match_detections(dets, gts, 0.0); }), ErrorCode::SchemaError);
  EXPECT_EQ(code_of([&] { match_detections(dets, gts, 1.5); }), ErrorCode::SchemaError);
  EXPECT_NO_THROW(match_detections(dets, gts, 1.0));
}

TEST(Accuracy, MeanDetectedLength) {
  EXPECT_DOUBLE_EQ(mean_detected_length(std::vector<double>{10, 20, 30}), 20.0);
  EXPECT_DOUBLE_EQ(mean_detected_length(std::vector<double>{35.0}), 35.0);
  EXPECT_NEAR(mean_detected_length(std::vector<double>{34.2, 35.9, 34.9}), 35.0, 1e-9);
  EXPECT_EQ(code_of([] { mean_detected_length(std::vector<double>{}); }), ErrorCode::EmptySample);
}

TEST(Accuracy, Percent) {
  EXPECT_EQ(length_accuracy_pct(73.0, 73.0), 100);
  EXPECT_EQ(length_accuracy_pct(72.27, 73.0), 99);
  EXPECT_EQ(length_accuracy_pct(0.0, 73.0), 0);
  EXPECT_EQ(length_accuracy_pct(500.0, 73.0), 0);
  EXPECT_EQ(code_of([] { length_accuracy_pct(1.0, 0.0); }), ErrorCode::NonPositiveActual);
  for (double x = 0.5; x < 100; x += 0.37) {
    EXPECT_EQ(length_accuracy_pct(x, x), 100);
    for (double m : {0.0, x * 0.5, x * 1.3, x * 3}) {
      const int pct = length_accuracy_pct(m, x);
      EXPECT_GE(pct, 0);
      EXPECT_LE(pct, 100);
    }
  }
}

TEST(Confusion, LeadingRowFromPaperTable) {
  const auto& db = TypeDatabase::builtin();
  std::vector<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < 9; ++i) pairs.emplace_back("LM100J", "LM100J");
  for (int i = 0; i < 2; ++i) pairs.emplace_back("LM100J", "G-650");
  pairs.emplace_back("LM100J", "A-320");
  const auto cm = build_confusion_matrix(pairs, db);
  EXPECT_EQ(cm.row(0), (std::vector<std::int64_t>{9, 0, 0, 2, 0, 0, 0, 0, 1}));
  EXPECT_EQ(cm.total(), 12);
  for (std::size_t r = 1; r < cm.size(); ++r) EXPECT_EQ(cm.row(r), std::vector<std::int64_t>(9, 0));
}

TEST(Confusion, DiagonalEmptyAndUnknown) {
  const auto& db = TypeDatabase::builtin();
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& t : db.entries()) pairs.emplace_back(t.code, t.code);
  const auto cm = build_confusion_matrix(pairs, db);
  for (std::size_t r = 0; r < 9; ++r)
    for (std::size_t c = 0; c < 9; ++c) EXPECT_EQ(cm.at(r, c), r == c ? 1 : 0);
  EXPECT_EQ(build_confusion_matrix({}, db).total(), 0);
  std::vector<std::pair<std::string, std::string>> bad = {{"LM100J", "B-747"}};
  EXPECT_EQ(code_of([&] { build_confusion_matrix(bad, db); }), ErrorCode::UnknownCode);
}

TEST(Confusion, RowSumsEqualInstanceCounts) {
  const auto& db = TypeDatabase::builtin();
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> pick(0, 8);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<std::int64_t> per_actual(9);
  for (int i = 0; i < 500; ++i) {
    const std::size_t a = pick(rng), p = pick(rng);
    pairs.emplace_back(db.entries()[a].code, db.entries()[p].code);
    ++per_actual[a];
  }
  const auto cm = build_confusion_matrix(pairs, db);
  for (std::size_t r = 0; r < 9; ++r) {
    std::int64_t sum = 0;
    for (auto v : cm.row(r)) sum += v;
    EXPECT_EQ(sum, per_actual[r]);
  }
  EXPECT_EQ(cm.total(), 500);
}
