#include "drr/grid.hpp"

#include <cmath>

namespace drr {

namespace {

struct AxisCoord {
  int i0, i1;
  double f;       // fraction within [i0, i1]
  double dfdp;    // d(f)/d(p) accounting for edge clamping
};

inline AxisCoord axis_coord(double p, double lo, double pitch, int n) {
  const double q = (p - lo) / pitch - 0.5;
  double fl = std::floor(q);
  int i0 = static_cast<int>(fl);
  double f = q - fl;
  double dfdp = 1.0 / pitch;
  if (i0 < 0) {  // below first center: clamp to edge value
    i0 = 0;
    f = 0.0;
    dfdp = 0.0;
  } else if (i0 >= n - 1) {
    i0 = n - 1;
    f = 0.0;
    dfdp = 0.0;
  }
  return {i0, i0 + 1 < n ? i0 + 1 : i0, f, dfdp};
}

inline bool outside(const DenseGrid& g, const Vec3d& p) {
  return p.x < g.extent.lo.x || p.x > g.extent.hi.x || p.y < g.extent.lo.y ||
         p.y > g.extent.hi.y || p.z < g.extent.lo.z || p.z > g.extent.hi.z;
}

}  // namespace

double sample_grid(const DenseGrid& grid, const Vec3d& p) {
  if (outside(grid, p)) return 0.0;
  const Vec3d d = grid.pitch();
  const AxisCoord ax = axis_coord(p.x, grid.extent.lo.x, d.x, grid.nx);
  const AxisCoord ay = axis_coord(p.y, grid.extent.lo.y, d.y, grid.ny);
  const AxisCoord az = axis_coord(p.z, grid.extent.lo.z, d.z, grid.nz);

  const double c000 = grid.at(ax.i0, ay.i0, az.i0), c100 = grid.at(ax.i1, ay.i0, az.i0);
  const double c010 = grid.at(ax.i0, ay.i1, az.i0), c110 = grid.at(ax.i1, ay.i1, az.i0);
  const double c001 = grid.at(ax.i0, ay.i0, az.i1), c101 = grid.at(ax.i1, ay.i0, az.i1);
  const double c011 = grid.at(ax.i0, ay.i1, az.i1), c111 = grid.at(ax.i1, ay.i1, az.i1);

  const double c00 = c000 + ax.f * (c100 - c000);
  const double c10 = c010 + ax.f * (c110 - c010);
  const double c01 = c001 + ax.f * (c101 - c001);
  const double c11 = c011 + ax.f * (c111 - c011);
  const double c0 = c00 + ay.f * (c10 - c00);
  const double c1 = c01 + ay.f * (c11 - c01);
  return c0 + az.f * (c1 - c0);
}

FieldSample sample_grid_grad(const DenseGrid& grid, const Vec3d& p) {
  if (outside(grid, p)) return {};
  const Vec3d d = grid.pitch();
  const AxisCoord ax = axis_coord(p.x, grid.extent.lo.x, d.x, grid.nx);
  const AxisCoord ay = axis_coord(p.y, grid.extent.lo.y, d.y, grid.ny);
  const AxisCoord az = axis_coord(p.z, grid.extent.lo.z, d.z, grid.nz);

  const double c000 = grid.at(ax.i0, ay.i0, az.i0), c100 = grid.at(ax.i1, ay.i0, az.i0);
  const double c010 = grid.at(ax.i0, ay.i1, az.i0), c110 = grid.at(ax.i1, ay.i1, az.i0);
  const double c001 = grid.at(ax.i0, ay.i0, az.i1), c101 = grid.at(ax.i1, ay.i0, az.i1);
  const double c011 = grid.at(ax.i0, ay.i1, az.i1), c111 = grid.at(ax.i1, ay.i1, az.i1);

  const double c00 = c000 + ax.f * (c100 - c000);
  const double c10 = c010 + ax.f * (c110 - c010);
  const double c01 = c001 + ax.f * (c101 - c001);
  const double c11 = c011 + ax.f * (c111 - c011);
  const double c0 = c00 + ay.f * (c10 - c00);
  const double c1 = c01 + ay.f * (c11 - c01);

  FieldSample out;
  out.value = c0 + az.f * (c1 - c0);
  out.grad.z = (c1 - c0) * az.dfdp;

  const double gy0 = c10 - c00, gy1 = c11 - c01;
  out.grad.y = (gy0 + az.f * (gy1 - gy0)) * ay.dfdp;

  const double gx00 = c100 - c000, gx10 = c110 - c010;
  const double gx01 = c101 - c001, gx11 = c111 - c011;
  const double gx0 = gx00 + ay.f * (gx10 - gx00);
  const double gx1 = gx01 + ay.f * (gx11 - gx01);
  out.grad.x = (gx0 + az.f * (gx1 - gx0)) * ax.dfdp;
  return out;
}

}  // namespace drr
