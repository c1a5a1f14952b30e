#include "apronid/photogrammetry.hpp"

#include <cmath>
#include <string>

#include "apronid/error.hpp"

namespace apronid {

namespace {

void require_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    throw Error(ErrorCode::InvalidCamera, std::string(name) + " must be positive, got " +
                                              std::to_string(value));
  }
}

}  // namespace

GroundSampleDistance::GroundSampleDistance(double cm_per_px) : cm_per_px_(cm_per_px) {
  require_positive(cm_per_px, "gsd_cm_per_px");
}

GroundSampleDistance compute_gsd(const CameraModel& camera) {
  require_positive(camera.sensor_width_mm, "sensor_width_mm");
  require_positive(camera.altitude_m, "altitude_m");
  require_positive(camera.focal_length_mm, "focal_length_mm");
  if (camera.image_width_px <= 0) {
    throw Error(ErrorCode::InvalidCamera, "image_width_px must be positive, got " +
                                              std::to_string(camera.image_width_px));
  }
  const double cm_per_px = (camera.sensor_width_mm * camera.altitude_m * 100.0) /
                           (camera.focal_length_mm * static_cast<double>(camera.image_width_px));
  return GroundSampleDistance(cm_per_px);
}

double surface_area_m2(std::size_t pixel_count, GroundSampleDistance gsd) noexcept {
  const double m = gsd.m_per_px();
  return static_cast<double>(pixel_count) * m * m;
}

double length_m(double diameter_px, GroundSampleDistance gsd) noexcept {
  return diameter_px * gsd.m_per_px();
}

}  // namespace apronid
