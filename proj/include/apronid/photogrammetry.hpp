#pragma once

#include <cstddef>
#include <cstdint>

namespace apronid {

// Nadir camera geometry. image_width_px is the image width in pixels: the
// reference drone survey (12.75 mm sensor, 120 m, 10.6 mm lens) substitutes
// 4608 px here to reach 3.13 cm/px.
struct CameraModel {
  double sensor_width_mm = 0.0;
  double altitude_m = 0.0;
  double focal_length_mm = 0.0;
  std::int64_t image_width_px = 0;
};

// Ground length covered by one pixel. Stored in cm/px, the unit the camera
// formula produces.
class GroundSampleDistance {
 public:
  // Throws InvalidCamera unless cm_per_px is finite and positive.
  explicit GroundSampleDistance(double cm_per_px);

  double cm_per_px() const noexcept { return cm_per_px_; }
  double m_per_px() const noexcept { return cm_per_px_ / 100.0; }

 private:
  double cm_per_px_;
};

// (sensor width * altitude * 100) / (focal length * image width), in cm/px.
// Throws InvalidCamera if any field is not strictly positive.
GroundSampleDistance compute_gsd(const CameraModel& camera);

// pixel_count * (m/px)^2.
double surface_area_m2(std::size_t pixel_count, GroundSampleDistance gsd) noexcept;

double length_m(double diameter_px, GroundSampleDistance gsd) noexcept;

}  // namespace apronid
