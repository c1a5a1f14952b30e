// Serial reference vs OpenMP kernels. Arg 0 runs serial, 1 runs parallel.

#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "apronid/evaluation.hpp"
#include "apronid/geometry.hpp"
#include "apronid/synthkit.hpp"

using namespace apronid;

namespace {

Execution mode(const benchmark::State& st) { return st.range(0) ? Execution::parallel : Execution::serial; }

SynthSpec plane(double length, double heading, std::uint64_t seed) {
  SynthSpec s;
  s.shape = SynthShape::cross;
  s.length_m = length;
  s.secondary_m = 0.8 * length;
  s.heading_deg = heading;
  s.gsd = GroundSampleDistance(3.13);
  s.seed = seed;
  return s;
}

// Re-centers a synthetic mask on a common canvas so IoU is defined.
PixelMask embed(const PixelMask& m, std::int32_t side) {
  const std::int32_t dx = (side - m.width()) / 2, dy = (side - m.height()) / 2;
  std::vector<PixelPoint> pts;
  for (const auto& p : m.points()) pts.push_back({p.x + dx, p.y + dy});
  return PixelMask::from_points(side, side, pts);
}

// A fixed scene: each ground truth has a rotated near-duplicate detection.
struct Scene {
  std::vector<GroundTruthRecord> gts;
  std::vector<DetectionRecord> dets;
};

const Scene& scene() {
  static const Scene s = [] {
    Scene out;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> len(13, 40), heading(0, 360), score(0, 1);
    for (int i = 0; i < 48; ++i) {
      const std::string id = "img" + std::to_string(i / 4);
      const double l = len(rng), h = heading(rng);
      out.gts.push_back({id, embed(synth_mask(plane(l, h, 0)).mask, 1400), "X"});
      out.dets.push_back({id, embed(synth_mask(plane(l * 1.02, h + 2, 0)).mask, 1400), score(rng)});
    }
    return out;
  }();
  return s;
}

void BM_IouMatrix(benchmark::State& st) {
  const auto& sc = scene();
  std::vector<const PixelMask*> rows, cols;
  for (const auto& d : sc.dets) rows.push_back(&d.mask);
  for (const auto& g : sc.gts) cols.push_back(&g.mask);
  for (auto _ : st) benchmark::DoNotOptimize(iou_matrix(rows, cols, mode(st)));
}

void BM_BatchFarthestPairs(benchmark::State& st) {
  const auto& sc = scene();
  std::vector<const PixelMask*> masks;
  for (const auto& g : sc.gts) masks.push_back(&g.mask);
  for (auto _ : st) benchmark::DoNotOptimize(batch_farthest_pairs(masks, mode(st)));
}

void BM_SynthRasterize(benchmark::State& st) {
  const auto spec = plane(73, 33.3, 1);
  for (auto _ : st) benchmark::DoNotOptimize(synth_mask(spec, mode(st)));
}

void BM_CocoEvaluate(benchmark::State& st) {
  const auto& sc = scene();
  for (auto _ : st) benchmark::DoNotOptimize(coco_evaluate(sc.dets, sc.gts, mode(st)));
}

}  // namespace

BENCHMARK(BM_IouMatrix)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BatchFarthestPairs)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_SynthRasterize)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CocoEvaluate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
