#include "apronid/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "apronid/error.hpp"

namespace apronid {

namespace {

std::vector<PixelPoint> unique_points(std::span<const PixelPoint> points) {
  if (points.empty()) {
    throw Error(ErrorCode::EmptyPointSet, "convex hull of an empty point set");
  }
  for (const PixelPoint& p : points) {
    if (std::abs(p.x) > kMaxCoordinate || std::abs(p.y) > kMaxCoordinate) {
      throw Error(ErrorCode::CoordinateOutOfRange,
                  "point (" + std::to_string(p.x) + "," + std::to_string(p.y) +
                      ") exceeds the exact-arithmetic range");
    }
  }
  std::vector<PixelPoint> sorted(points.begin(), points.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return sorted;
}

// Leftmost, then smallest row.
bool start_before(PixelPoint a, PixelPoint b) {
  return a.x != b.x ? a.x < b.x : a.y < b.y;
}

void rotate_to_canonical_start(std::vector<PixelPoint>& vertices) {
  auto start = std::min_element(vertices.begin(), vertices.end(), start_before);
  std::rotate(vertices.begin(), start, vertices.end());
}

}  // namespace

PixelMask::PixelMask(std::int32_t width, std::int32_t height) : width_(width), height_(height) {
  if (width < 0 || height < 0) {
    throw Error(ErrorCode::InvalidMask, "negative mask dimensions");
  }
}

PixelMask PixelMask::from_points(std::int32_t width, std::int32_t height,
                                 std::vector<PixelPoint> points) {
  PixelMask mask(width, height);
  for (const PixelPoint& p : points) {
    if (p.x < 0 || p.y < 0 || p.x >= width || p.y >= height) {
      throw Error(ErrorCode::InvalidMask,
                  "pixel (" + std::to_string(p.x) + "," + std::to_string(p.y) + ") outside " +
                      std::to_string(width) + "x" + std::to_string(height) + " raster");
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  mask.points_ = std::move(points);
  return mask;
}

PixelMask PixelMask::from_raster(std::int32_t width, std::int32_t height,
                                 std::span<const std::uint8_t> values) {
  PixelMask mask(width, height);
  if (values.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(ErrorCode::InvalidMask, "raster size does not match dimensions");
  }
  std::size_t i = 0;
  for (std::int32_t y = 0; y < height; ++y) {
    for (std::int32_t x = 0; x < width; ++x, ++i) {
      if (values[i] != 0) mask.points_.push_back({x, y});
    }
  }
  return mask;
}

bool PixelMask::contains(PixelPoint p) const {
  return std::binary_search(points_.begin(), points_.end(), p);
}

std::vector<PixelPoint> PixelMask::row_extremes() const {
  std::vector<PixelPoint> out;
  std::size_t i = 0;
  while (i < points_.size()) {
    std::size_t j = i;
    while (j + 1 < points_.size() && points_[j + 1].y == points_[i].y) ++j;
    out.push_back(points_[i]);
    if (j != i) out.push_back(points_[j]);
    i = j + 1;
  }
  return out;
}

std::vector<std::uint8_t> PixelMask::to_raster() const {
  std::vector<std::uint8_t> raster(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_), 0);
  for (const PixelPoint& p : points_) {
    raster[static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(p.x)] = 1;
  }
  return raster;
}

ConvexHull convex_hull_giftwrap(std::span<const PixelPoint> points) {
  const std::vector<PixelPoint> pts = unique_points(points);
  ConvexHull hull;
  const PixelPoint start = *std::min_element(pts.begin(), pts.end(), start_before);
  hull.vertices.push_back(start);
  if (pts.size() == 1) return hull;

  PixelPoint current = start;
  // A strict hull has at most pts.size() vertices; the bound guards the loop.
  for (std::size_t step = 0; step < pts.size(); ++step) {
    PixelPoint candidate = pts.front() == current ? pts[1] : pts.front();
    for (const PixelPoint& q : pts) {
      if (q == current) continue;
      const std::int64_t turn = orientation(current, candidate, q);
      // q clockwise of current->candidate, or collinear and farther out.
      if (turn < 0 ||
          (turn == 0 && squared_distance(current, q) > squared_distance(current, candidate))) {
        candidate = q;
      }
    }
    if (candidate == start) break;
    hull.vertices.push_back(candidate);
    current = candidate;
  }
  return hull;
}

ConvexHull convex_hull_monotone(std::span<const PixelPoint> points) {
  std::vector<PixelPoint> pts = unique_points(points);
  ConvexHull hull;
  if (pts.size() == 1) {
    hull.vertices = std::move(pts);
    return hull;
  }
  // Sweep by x, then by y-up height (descending row index).
  std::sort(pts.begin(), pts.end(), [](PixelPoint a, PixelPoint b) {
    return a.x != b.x ? a.x < b.x : a.y > b.y;
  });

  std::vector<PixelPoint> chain(2 * pts.size());
  std::size_t k = 0;
  for (const PixelPoint& p : pts) {
    while (k >= 2 && orientation(chain[k - 2], chain[k - 1], p) <= 0) --k;
    chain[k++] = p;
  }
  const std::size_t lower_size = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower_size && orientation(chain[k - 2], chain[k - 1], pts[i]) <= 0) --k;
    chain[k++] = pts[i];
  }
  chain.resize(k - 1);
  rotate_to_canonical_start(chain);
  hull.vertices = std::move(chain);
  return hull;
}

double FarthestPair::distance() const {
  return std::sqrt(static_cast<double>(squared_distance));
}

FarthestPair hull_farthest_pair(const ConvexHull& hull) {
  const auto& v = hull.vertices;
  const std::size_t n = v.size();
  if (n == 0) throw Error(ErrorCode::EmptyPointSet, "hull has no vertices");
  FarthestPair best{v[0], v[0], 0};
  auto consider = [&best](PixelPoint a, PixelPoint b) {
    const std::int64_t d = squared_distance(a, b);
    if (d > best.squared_distance) best = {a, b, d};
  };
  if (n == 1) return best;
  if (n == 2) {
    consider(v[0], v[1]);
    return best;
  }

  std::size_t j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ni = (i + 1) % n;
    while (orientation(v[i], v[ni], v[(j + 1) % n]) > orientation(v[i], v[ni], v[j])) {
      j = (j + 1) % n;
    }
    consider(v[i], v[j]);
    consider(v[ni], v[j]);
    // An edge parallel to (i, ni) has two antipodal vertices.
    const std::size_t nj = (j + 1) % n;
    if (orientation(v[i], v[ni], v[nj]) == orientation(v[i], v[ni], v[j])) {
      consider(v[i], v[nj]);
      consider(v[ni], v[nj]);
    }
  }
  return best;
}

FarthestPair mask_farthest_pair(const PixelMask& mask) {
  if (mask.empty()) throw Error(ErrorCode::EmptyMask, "diameter of an empty mask");
  const std::vector<PixelPoint> candidates = mask.row_extremes();
  return hull_farthest_pair(convex_hull_giftwrap(candidates));
}

double mask_diameter_px(const PixelMask& mask) {
  return mask_farthest_pair(mask).distance();
}

std::size_t pixel_count(const PixelMask& mask) noexcept { return mask.pixel_count(); }

std::vector<FarthestPair> batch_farthest_pairs(std::span<const PixelMask* const> masks, Execution exec) {
  for (const PixelMask* m : masks) {
    if (m->empty()) throw Error(ErrorCode::EmptyMask, "diameter of an empty mask");
  }
  std::vector<FarthestPair> out(masks.size());
  const long n = static_cast<long>(masks.size());
  if (exec == Execution::serial) {
    for (long i = 0; i < n; ++i) out[i] = mask_farthest_pair(*masks[i]);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) out[i] = mask_farthest_pair(*masks[i]);
  }
  return out;
}

}  // namespace apronid
