#include "drr/field.hpp"

namespace drr {

double NettField::sample(const Vec3d& p) const {
  const double sigma = sample_grid(grid_, p);
  if (sigma == 0.0) return 0.0;
  const auto enc = encode_density(sigma);
  return mlp_forward(weights_, enc);
}

FieldSample NettField::sample_with_grad(const Vec3d& p) const {
  const FieldSample base = sample_grid_grad(grid_, p);
  if (base.value == 0.0) return {};
  const auto enc = encode_density(base.value);
  const auto denc = encode_density_deriv(base.value);
  const MlpJvpResult<1> r = mlp_forward_jvp1(weights_, enc, denc);
  const double dd = r.deriv[0];  // d(sigma_hat)/d(sigma)
  return {r.value, {dd * base.grad.x, dd * base.grad.y, dd * base.grad.z}};
}

double MnerfField::sample(const Vec3d& p) const {
  if (!mask_.contains(p)) return 0.0;
  const auto enc = encode_position(p);
  return mlp_forward(weights_, enc);
}

FieldSample MnerfField::sample_with_grad(const Vec3d& p) const {
  if (!mask_.contains(p)) return {};
  const auto enc = encode_position(p);
  const auto jac = encode_position_jacobian(p);
  const MlpJvpResult<3> r = mlp_forward_jvp3(weights_, enc, jac.d);
  return {r.value, {r.deriv[0], r.deriv[1], r.deriv[2]}};
}

double nett_sample(const DenseGrid& grid, const MlpWeights& w, const Vec3d& p) {
  return NettField(grid, w).sample(p);
}

double mnerf_sample(const MlpWeights& w, const Mask3D& mask, const Vec3d& p) {
  return MnerfField(w, mask).sample(p);
}

}  // namespace drr
