#include "drr/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace drr {

double angle_error(const Vec3d& theta_est_deg, const Vec3d& theta_true_deg) {
  const Mat3d re = euler_yxz_to_matrix(theta_est_deg);
  const Mat3d rt = euler_yxz_to_matrix(theta_true_deg);
  const Mat3d rel = re * transpose(rt);
  const double trace = rel(0, 0) + rel(1, 1) + rel(2, 2);
  // Round-off can push the argument past +-1; clamp (tolerance 1e-9 by design).
  const double arg = std::clamp((trace - 1.0) / 2.0, -1.0, 1.0);
  const double deg = std::acos(arg) / detail::kDegToRad;
  return std::clamp(deg, 0.0, 180.0);
}

std::pair<double, double> scale_geometry(double sod_physical, double sid_physical,
                                         double volume_extent_physical, double ndc_extent,
                                         double image_px_src, double image_px_dst) {
  if (sod_physical <= 0.0 || sid_physical <= 0.0 || volume_extent_physical <= 0.0 ||
      ndc_extent <= 0.0 || image_px_src <= 0.0 || image_px_dst <= 0.0)
    throw std::invalid_argument("scale_geometry: all inputs must be positive");
  const double sod_ndc = sod_physical * ndc_extent / volume_extent_physical;
  const double sid_ndc = sid_physical * image_px_dst / image_px_src;
  return {sod_ndc, sid_ndc};
}

Pose source_to_object_frame(const Pose& pose) {
  // The six values carry over unchanged; only the frame interpretation
  // differs (see header). Kept as an explicit conversion point so callers
  // state which configuration a pose lives in.
  return pose;
}

std::pair<Mat3d, Vec3d> object_motion_transform(const Pose& object_pose) {
  const Mat3d rot = euler_yxz_to_matrix(object_pose.theta);
  return {rot, rot * object_pose.u};
}

}  // namespace drr
