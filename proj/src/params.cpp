#include "suctiongrip/params.hpp"

#include <cmath>
#include <string>

#include "suctiongrip/errors.hpp"

namespace suctiongrip {

namespace {
void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParams(what);
}
}  // namespace

void AnalysisParams::validate() const {
  require(cup_diameter > 0.0, "cup_diameter must be positive");
  require(cup_count >= 3, "cup_count must be at least 3");
  require(min_spacing >= 0.0, "min_spacing must be non-negative");
  require(flatness_tol >= 0.0, "flatness_tol must be non-negative");
  require(cone_slope >= 0.0, "cone_slope must be non-negative");
  require(max_curvature_angle >= 0.0 && max_curvature_angle <= 180.0,
          "max_curvature_angle must lie in [0, 180]");
  require(max_tilt >= 0.0 && max_tilt <= 180.0, "max_tilt must lie in [0, 180]");
  require(std::abs(approach_axis.norm() - 1.0) <= 1e-9, "approach axis must have unit length");
  require(std::abs(gravity.norm() - 1.0) <= 1e-9, "gravity must have unit length");
  require(min_line_offset >= 0.0, "min_line_offset must be non-negative");
  require(stability_margin >= 0.0, "stability_margin must be non-negative");
  require(raster_spacing >= 0.0, "raster_spacing must be non-negative");
  require(roughness_limit >= 0.0, "roughness_limit must be non-negative");
  require((raster_frame * raster_frame.transpose() - Mat3::Identity()).norm() <= 1e-9 &&
              raster_frame.determinant() > 0.0,
          "raster_frame must be a rotation matrix");
}

void ToleranceSpec::validate() const {
  require(pos_transverse_tol >= 0.0 && pos_height_tol >= 0.0 && normal_tilt_tol >= 0.0 &&
              curvature_tol >= 0.0,
          "tolerances must be non-negative");
}

}  // namespace suctiongrip
