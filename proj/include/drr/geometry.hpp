#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "drr/scalar.hpp"
#include "drr/vec.hpp"

namespace drr {

// Frame conventions (frozen; every other module inherits them):
//  * Right-handed world frame, origin at the isocenter, volume in the
//    [-1,1]^3 NDC cube.
//  * At the identity pose the source sits on +Z at (0, 0, sod); the optical
//    axis runs from source to detector along -Z; the detector center is at
//    (0, 0, sod - sid).
//  * Euler angles are intrinsic, applied Y then X then Z (R = Ry*Rx*Rz),
//    positive in the right-handed sense; degrees at API boundaries, radians
//    only inside rotation construction. Ry(90) maps +Z to +X.
//  * The rig moves as: translate by u first, then rotate about the
//    isocenter, so a rig point x0 goes to R*(x0 + u).
//  * Pixel (0,0) is the top-left detector corner, row-major; columns grow
//    toward +X and rows toward -Y at the identity pose.

// 6DoF source pose: three intrinsic YXZ Euler angles (degrees) and three
// translations (NDC units).
template <class S>
struct PoseT {
  Vec3<S> theta{};  // degrees, applied Y then X then Z
  Vec3<S> u{};      // NDC translation
};

using Pose = PoseT<double>;

template <class S>
PoseT<S> lift_pose(const Pose& p) {
  return {{S(p.theta.x), S(p.theta.y), S(p.theta.z)}, {S(p.u.x), S(p.u.y), S(p.u.z)}};
}

// Projection geometry in NDC units. `sid_ndc` is expressed in detector
// pixel pitches (Appendix-style Eq. S2 scaling); only the ratio
// pixel-offset/sid enters ray directions, so no separate pitch is needed.
// `slab_half` is the half-extent of the sampled slab along the viewing
// axis (the volume faces for the default NDC cube).
struct RenderGeometry {
  double sod_ndc = 7.8125;
  double sid_ndc = 768.0;
  int image_w = 128;
  int image_h = 128;
  int n_samples = 128;
  double slab_half = 1.0;

  bool non_square() const { return image_w != image_h; }

  void validate() const {
    if (sod_ndc <= 0.0) throw std::invalid_argument("geometry: sod_ndc must be positive");
    if (sid_ndc <= sod_ndc)
      throw std::invalid_argument("geometry: sid_ndc must exceed sod_ndc");
    if (image_w <= 0 || image_h <= 0)
      throw std::invalid_argument("geometry: image dimensions must be positive");
    if (n_samples < 2) throw std::invalid_argument("geometry: need at least 2 samples per ray");
    if (slab_half <= 0.0) throw std::invalid_argument("geometry: slab_half must be positive");
  }
};

// One ray per pixel, row-major. Directions are unit vectors; near/far are
// the ray-arclength intersections with the slab planes and do not depend
// on the pose (the slab moves with the rig).
template <class S>
struct RayBundle {
  Vec3<S> origin;
  std::vector<Vec3<S>> dirs;
  std::vector<double> near;
  std::vector<double> far;
  int width = 0;
  int height = 0;
};

namespace detail {
inline constexpr double kDegToRad = 0.017453292519943295;
}

template <class S>
Mat3<S> rotation_y(const S& deg) {
  const S a = deg * detail::kDegToRad;
  const S c = cos(a), s = sin(a);
  Mat3<S> m;
  m.m = {c, S(0.0), s, S(0.0), S(1.0), S(0.0), -s, S(0.0), c};
  return m;
}

template <class S>
Mat3<S> rotation_x(const S& deg) {
  const S a = deg * detail::kDegToRad;
  const S c = cos(a), s = sin(a);
  Mat3<S> m;
  m.m = {S(1.0), S(0.0), S(0.0), S(0.0), c, -s, S(0.0), s, c};
  return m;
}

template <class S>
Mat3<S> rotation_z(const S& deg) {
  const S a = deg * detail::kDegToRad;
  const S c = cos(a), s = sin(a);
  Mat3<S> m;
  m.m = {c, -s, S(0.0), s, c, S(0.0), S(0.0), S(0.0), S(1.0)};
  return m;
}

// Intrinsic YXZ composition.
template <class S>
Mat3<S> euler_yxz_to_matrix(const Vec3<S>& theta_deg) {
  return rotation_y(theta_deg.x) * (rotation_x(theta_deg.y) * rotation_z(theta_deg.z));
}

// Axis-angle magnitude of R_est * R_true^T in degrees, clamped to [0, 180].
double angle_error(const Vec3d& theta_est_deg, const Vec3d& theta_true_deg);

// Maps physical SOD/SID to NDC values: SOD scales with the volume-to-NDC
// extent ratio, SID with the image resize ratio, keeping the projected
// geometry invariant.
std::pair<double, double> scale_geometry(double sod_physical, double sid_physical,
                                         double volume_extent_physical, double ndc_extent,
                                         double image_px_src, double image_px_dst);

// Equivalent object motion under a stationary rig: same six parameter
// values, reinterpreted as extrinsic "yxz" rotations first and translations
// second, both measured in the left-handed frames of the fixed-source
// configuration (positional origin at the source, angular origin at the
// isocenter). Composing the returned pose via object_motion_transform with
// an identity-rig projection reproduces the moving-source DRR.
Pose source_to_object_frame(const Pose& pose);

// Affine query map (A, b) realizing an object pose from
// source_to_object_frame: sampling base_field(A*p + b) under the identity
// rig renders the equivalent image.
std::pair<Mat3d, Vec3d> object_motion_transform(const Pose& object_pose);

// Builds one unit-direction ray per pixel for the posed rig.
template <class S>
RayBundle<S> pose_to_rays(const PoseT<S>& pose, const RenderGeometry& geom) {
  geom.validate();
  const Mat3<S> rot = euler_yxz_to_matrix(pose.theta);
  RayBundle<S> rays;
  rays.width = geom.image_w;
  rays.height = geom.image_h;

  // Source: translate first, then rotate about the isocenter.
  const Vec3<S> s0{pose.u.x, pose.u.y, pose.u.z + S(geom.sod_ndc)};
  rays.origin = rot * s0;

  const std::size_t n = static_cast<std::size_t>(geom.image_w) * geom.image_h;
  rays.dirs.reserve(n);
  rays.near.reserve(n);
  rays.far.reserve(n);
  const double cx = 0.5 * (geom.image_w - 1);
  const double cy = 0.5 * (geom.image_h - 1);
  for (int row = 0; row < geom.image_h; ++row) {
    for (int col = 0; col < geom.image_w; ++col) {
      const double px = col - cx;
      const double py = cy - row;
      const double len = std::sqrt(px * px + py * py + geom.sid_ndc * geom.sid_ndc);
      // Unit direction in the camera frame; constant per pixel.
      const double dx = px / len, dy = py / len, dz = -geom.sid_ndc / len;
      rays.dirs.push_back({madd(rot(0, 1), S(dy), madd(rot(0, 0), S(dx), rot(0, 2) * S(dz))),
                           madd(rot(1, 1), S(dy), madd(rot(1, 0), S(dx), rot(1, 2) * S(dz))),
                           madd(rot(2, 1), S(dy), madd(rot(2, 0), S(dx), rot(2, 2) * S(dz)))});
      const double cos_beta = geom.sid_ndc / len;
      rays.near.push_back((geom.sod_ndc - geom.slab_half) / cos_beta);
      rays.far.push_back((geom.sod_ndc + geom.slab_half) / cos_beta);
    }
  }
  return rays;
}

}  // namespace drr
