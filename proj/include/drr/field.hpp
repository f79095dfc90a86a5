#pragma once

#include "drr/encoding.hpp"
#include "drr/grid.hpp"
#include "drr/mask.hpp"
#include "drr/mlp.hpp"
#include "drr/scalar.hpp"
#include "drr/vec.hpp"

namespace drr {

// Queryable scalar density over the NDC cube. Implementations must be
// deterministic, non-negative everywhere, and provide the exact spatial
// gradient alongside the value; differentiation w.r.t. the query point
// treats a field sample as a single primitive. Fields are immutable after
// construction, so sampling is freely parallel.
class DensityField {
 public:
  virtual ~DensityField() = default;
  virtual double sample(const Vec3d& p) const = 0;
  virtual FieldSample sample_with_grad(const Vec3d& p) const = 0;
};

class GridField : public DensityField {
 public:
  explicit GridField(const DenseGrid& grid) : grid_(grid) {}
  double sample(const Vec3d& p) const override { return sample_grid(grid_, p); }
  FieldSample sample_with_grad(const Vec3d& p) const override {
    return sample_grid_grad(grid_, p);
  }
  const DenseGrid& grid() const { return grid_; }

 private:
  const DenseGrid& grid_;
};

// Density-tuning field: grid densities are frequency-encoded and remapped
// by the network. Zero grid densities bypass the network exactly (air and
// out-of-volume samples stay zero for any weights).
class NettField : public DensityField {
 public:
  NettField(const DenseGrid& grid, const MlpWeights& weights)
      : grid_(grid), weights_(weights) {}
  double sample(const Vec3d& p) const override;
  FieldSample sample_with_grad(const Vec3d& p) const override;

 private:
  const DenseGrid& grid_;
  const MlpWeights& weights_;
};

// Masked coordinate network: position-encoded MLP density, forced to zero
// outside the mask.
class MnerfField : public DensityField {
 public:
  MnerfField(const MlpWeights& weights, const Mask3D& mask) : weights_(weights), mask_(mask) {}
  double sample(const Vec3d& p) const override;
  FieldSample sample_with_grad(const Vec3d& p) const override;

 private:
  const MlpWeights& weights_;
  const Mask3D& mask_;
};

// Samples the base field through an affine query map p -> A p + b; used to
// render object motion under a stationary rig.
class TransformedField : public DensityField {
 public:
  TransformedField(const DensityField& base, const Mat3d& a, const Vec3d& b)
      : base_(base), a_(a), b_(b) {}
  double sample(const Vec3d& p) const override { return base_.sample(a_ * p + b_); }
  FieldSample sample_with_grad(const Vec3d& p) const override {
    FieldSample s = base_.sample_with_grad(a_ * p + b_);
    return {s.value, transpose(a_) * s.grad};
  }

 private:
  const DensityField& base_;
  Mat3d a_;
  Vec3d b_;
};

// Spec-level sampling operations.
double nett_sample(const DenseGrid& grid, const MlpWeights& w, const Vec3d& p);
double mnerf_sample(const MlpWeights& w, const Mask3D& mask, const Vec3d& p);

// Generic field sampling over the three scalar backends. A sample is a
// differentiation primitive: tape and dual variants consume the analytic
// spatial gradient.
inline double field_sample(const DensityField& f, const Vec3<double>& p) {
  return f.sample(p);
}

inline ad::Var field_sample(const DensityField& f, const Vec3<ad::Var>& p) {
  if (p.x.is_const() && p.y.is_const() && p.z.is_const())
    return ad::Var(f.sample({p.x.v, p.y.v, p.z.v}));
  const FieldSample s = f.sample_with_grad({p.x.v, p.y.v, p.z.v});
  return ad::detail::ternary(s.value, p.x, s.grad.x, p.y, s.grad.y, p.z, s.grad.z,
                             "field_sample");
}

template <int N>
ad::Dual<N> field_sample(const DensityField& f, const Vec3<ad::Dual<N>>& p) {
  const FieldSample s = f.sample_with_grad({p.x.v, p.y.v, p.z.v});
  ad::Dual<N> out(s.value);
  for (int i = 0; i < N; ++i)
    out.d[i] = s.grad.x * p.x.d[i] + s.grad.y * p.y.d[i] + s.grad.z * p.z.d[i];
  return out;
}

}  // namespace drr
