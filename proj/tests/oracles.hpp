// Independent reference implementations used as test oracles. Nothing here
// calls the library's geometry; the code is deliberately naive.
#pragma once

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "apronid/geometry.hpp"

namespace oracle {

using apronid::PixelPoint;

inline std::int64_t cross_up(PixelPoint o, PixelPoint a, PixelPoint b) {
  // Cross product with y flipped to point up.
  const std::int64_t ax = a.x - std::int64_t{o.x}, ay = -(a.y - std::int64_t{o.y});
  const std::int64_t bx = b.x - std::int64_t{o.x}, by = -(b.y - std::int64_t{o.y});
  return ax * by - ay * bx;
}

inline std::int64_t dist2(PixelPoint a, PixelPoint b) {
  const std::int64_t dx = a.x - std::int64_t{b.x}, dy = a.y - std::int64_t{b.y};
  return dx * dx + dy * dy;
}

// O(n^3) hull. (a, b) is a counter-clockwise (y-up) edge when no point lies to
// its right and every collinear point sits on the closed segment. The result
// walks those edges from the leftmost point (smallest row on ties).
inline std::vector<PixelPoint> brute_force_hull(std::vector<PixelPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](PixelPoint a, PixelPoint b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 1) return pts;

  std::vector<std::pair<PixelPoint, PixelPoint>> edges;
  for (const PixelPoint& a : pts) {
    for (const PixelPoint& b : pts) {
      if (a == b) continue;
      bool edge = true;
      for (const PixelPoint& p : pts) {
        const std::int64_t c = cross_up(a, b, p);
        if (c < 0) {
          edge = false;
          break;
        }
        if (c == 0) {
          const std::int64_t dot = (p.x - std::int64_t{a.x}) * (b.x - std::int64_t{a.x}) +
                                   (p.y - std::int64_t{a.y}) * (b.y - std::int64_t{a.y});
          if (dot < 0 || dot > dist2(a, b)) {
            edge = false;
            break;
          }
        }
      }
      if (edge) edges.emplace_back(a, b);
    }
  }
  std::vector<PixelPoint> hull{pts.front()};
  for (std::size_t guard = 0; guard < edges.size(); ++guard) {
    const PixelPoint cur = hull.back();
    auto it = std::find_if(edges.begin(), edges.end(), [&](const auto& e) { return e.first == cur; });
    if (it == edges.end() || it->second == hull.front()) break;
    hull.push_back(it->second);
  }
  return hull;
}

inline std::int64_t all_pairs_diameter_sq(const std::vector<PixelPoint>& pts) {
  std::int64_t best = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, dist2(pts[i], pts[j]));
  }
  return best;
}

inline std::vector<PixelPoint> random_points(std::mt19937_64& rng, std::size_t n, std::int32_t range) {
  std::uniform_int_distribution<std::int32_t> coord(0, range - 1);
  std::vector<PixelPoint> pts(n);
  for (auto& p : pts) p = {coord(rng), coord(rng)};
  return pts;
}

// A few overlapping discs plus scattered pixels; blob-like but irregular.
inline std::vector<PixelPoint> random_blob(std::mt19937_64& rng, std::int32_t w, std::int32_t h) {
  std::uniform_int_distribution<std::int32_t> xs(0, w - 1), ys(0, h - 1), rs(1, std::max(1, std::min(w, h) / 4));
  std::uniform_int_distribution<int> discs(1, 4), speckle(0, 12);
  std::set<std::pair<std::int32_t, std::int32_t>> on;
  const int nd = discs(rng);
  for (int d = 0; d < nd; ++d) {
    const std::int32_t cx = xs(rng), cy = ys(rng), r = rs(rng);
    for (std::int32_t y = std::max(0, cy - r); y <= std::min(h - 1, cy + r); ++y) {
      for (std::int32_t x = std::max(0, cx - r); x <= std::min(w - 1, cx + r); ++x) {
        if ((x - cx) * (x - cx) + (y - cy) * (y - cy) <= r * r) on.insert({y, x});
      }
    }
  }
  const int ns = speckle(rng);
  for (int s = 0; s < ns; ++s) on.insert({ys(rng), xs(rng)});
  std::vector<PixelPoint> pts;
  for (const auto& [y, x] : on) pts.push_back({x, y});
  return pts;
}

// Pixel-center inclusion by direct formula over the whole canvas.
enum class Shape { rectangle, ellipse, cross };

inline bool inside(Shape shape, double u, double v, double length_px, double secondary_px) {
  const double hl = length_px / 2, hs = secondary_px / 2;
  switch (shape) {
    case Shape::rectangle: return std::abs(u) <= hl && std::abs(v) <= hs;
    case Shape::ellipse: return (u * u) / (hl * hl) + (v * v) / (hs * hs) <= 1.0;
    case Shape::cross:
      return (std::abs(u) <= hl && std::abs(v) <= 0.05 * hl) || (std::abs(u) <= 0.12 * hl && std::abs(v) <= hs);
  }
  return false;
}

inline std::vector<PixelPoint> scan_shape(Shape shape, double length_px, double secondary_px, double heading_deg,
                                          std::int32_t w, std::int32_t h, double cx, double cy) {
  const double rad = heading_deg * 3.14159265358979323846 / 180.0;
  const double c = std::cos(rad), s = std::sin(rad);
  std::vector<PixelPoint> out;
  for (std::int32_t y = 0; y < h; ++y) {
    for (std::int32_t x = 0; x < w; ++x) {
      const double dx = x - cx, dy = y - cy;
      if (inside(shape, dx * c + dy * s, -dx * s + dy * c, length_px, secondary_px)) out.push_back({x, y});
    }
  }
  return out;
}

// Paper's reference type table, kept separately from the library copy.
struct TypeRow {
  const char* code;
  double length_m;
};
inline constexpr std::array<TypeRow, 9> kTable4 = {{{"LM100J", 35},
                                                    {"G-280", 20},
                                                    {"G-550", 29},
                                                    {"G-650", 30},
                                                    {"CJ4", 16},
                                                    {"CM2", 13},
                                                    {"Bo787", 57},
                                                    {"A-380", 73},
                                                    {"A-320", 38}}};

// Nearest length by exhaustive scan; ties to the shorter length.
inline std::string nearest_code(double length) {
  const TypeRow* best = nullptr;
  for (const TypeRow& t : kTable4) {
    if (!best) {
      best = &t;
      continue;
    }
    const double d = std::abs(length - t.length_m), bd = std::abs(length - best->length_m);
    if (d < bd || (d == bd && t.length_m < best->length_m)) best = &t;
  }
  return best->code;
}

// Codes reachable when a type's measured length ranges over
// [actual (1 - rel), actual (1 + rel)]. Classification is a monotone step
// function, so sampling the interval densely finds every reachable cell.
inline std::set<std::string> reachable_codes(double actual, double rel) {
  std::set<std::string> out;
  const double lo = actual * (1 - rel), hi = actual * (1 + rel);
  constexpr int kSteps = 20000;
  for (int i = 0; i <= kSteps; ++i) out.insert(nearest_code(lo + (hi - lo) * i / kSteps));
  return out;
}

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

// Runs a shell command and captures stdout.
inline CommandResult run_command(const std::string& cmd) {
  CommandResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::filesystem::path fresh_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("apronid_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace oracle
