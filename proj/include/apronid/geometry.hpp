#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "apronid/execution.hpp"

namespace apronid {

// A pixel center on the integer grid. x is the column, y is the row; rows grow
// downward as in raster files. Points order row-major (y first, then x).
struct PixelPoint {
  std::int32_t x = 0;
  std::int32_t y = 0;

  friend constexpr bool operator==(const PixelPoint&, const PixelPoint&) = default;
  friend constexpr std::strong_ordering operator<=>(const PixelPoint& a, const PixelPoint& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

// Hull and distance arithmetic is exact in 64-bit integers as long as every
// coordinate magnitude stays below this bound.
inline constexpr std::int32_t kMaxCoordinate = (1 << 30) - 1;

// Binary foreground raster for one object instance. Foreground points are kept
// unique and sorted row-major; every point lies inside width x height.
class PixelMask {
 public:
  PixelMask() = default;
  PixelMask(std::int32_t width, std::int32_t height);

  // Sorts and de-duplicates `points`. Throws InvalidMask when a point falls
  // outside the raster or the dimensions are negative.
  static PixelMask from_points(std::int32_t width, std::int32_t height,
                               std::vector<PixelPoint> points);

  // Row-major raster of width*height values; any nonzero value is foreground.
  static PixelMask from_raster(std::int32_t width, std::int32_t height,
                               std::span<const std::uint8_t> values);

  std::int32_t width() const noexcept { return width_; }
  std::int32_t height() const noexcept { return height_; }
  std::span<const PixelPoint> points() const noexcept { return points_; }
  std::size_t pixel_count() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  bool contains(PixelPoint p) const;

  // Leftmost and rightmost foreground pixel of each occupied row (one point
  // when a row holds a single pixel). Their convex hull equals the hull of the
  // whole mask, so hull and diameter searches only need these.
  std::vector<PixelPoint> row_extremes() const;

  // Row-major 0/1 raster.
  std::vector<std::uint8_t> to_raster() const;

  friend bool operator==(const PixelMask&, const PixelMask&) = default;

 private:
  std::int32_t width_ = 0;
  std::int32_t height_ = 0;
  std::vector<PixelPoint> points_;
};

// Convex hull with strict turns. Vertices run counter-clockwise with y pointing
// up (clockwise on screen) and start at the leftmost point, ties going to the
// smallest row index. Degenerate inputs give one or two vertices.
struct ConvexHull {
  std::vector<PixelPoint> vertices;

  friend bool operator==(const ConvexHull&, const ConvexHull&) = default;
};

// Twice the signed area of triangle (o, a, b) measured with y pointing up;
// positive for a counter-clockwise turn.
constexpr std::int64_t orientation(PixelPoint o, PixelPoint a, PixelPoint b) noexcept {
  const std::int64_t ax = std::int64_t{a.x} - o.x;
  const std::int64_t ay = std::int64_t{a.y} - o.y;
  const std::int64_t bx = std::int64_t{b.x} - o.x;
  const std::int64_t by = std::int64_t{b.y} - o.y;
  // Row-down storage flips the sign of the usual cross product.
  return ay * bx - ax * by;
}

constexpr std::int64_t squared_distance(PixelPoint a, PixelPoint b) noexcept {
  const std::int64_t dx = std::int64_t{a.x} - b.x;
  const std::int64_t dy = std::int64_t{a.y} - b.y;
  return dx * dx + dy * dy;
}

// Jarvis march from the leftmost point. Throws EmptyPointSet on empty input
// and CoordinateOutOfRange if any |coordinate| exceeds kMaxCoordinate.
ConvexHull convex_hull_giftwrap(std::span<const PixelPoint> points);

// Andrew's monotone chain, rotated into the same canonical order as the
// giftwrap result. Same contract as convex_hull_giftwrap.
ConvexHull convex_hull_monotone(std::span<const PixelPoint> points);

struct FarthestPair {
  PixelPoint first;
  PixelPoint second;
  std::int64_t squared_distance = 0;

  double distance() const;
};

// Rotating calipers over the hull vertices; comparisons stay in integers.
// Throws EmptyPointSet for a hull without vertices.
FarthestPair hull_farthest_pair(const ConvexHull& hull);

// Farthest pair of foreground pixel centers. Throws EmptyMask.
FarthestPair mask_farthest_pair(const PixelMask& mask);

// Largest center-to-center distance between foreground pixels, in pixels.
// Throws EmptyMask.
double mask_diameter_px(const PixelMask& mask);

std::size_t pixel_count(const PixelMask& mask) noexcept;

// mask_farthest_pair over many masks, one task per mask. Throws EmptyMask
// before any work starts if a mask is empty.
std::vector<FarthestPair> batch_farthest_pairs(std::span<const PixelMask* const> masks,
                                               Execution exec = Execution::parallel);

}  // namespace apronid
