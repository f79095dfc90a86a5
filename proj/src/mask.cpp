#include "drr/mask.hpp"

#include <cmath>
#include <stdexcept>

namespace drr {

Mask3D build_mask(const DenseGrid& grid, double threshold, double dilation_ndc) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("build_mask: threshold must lie in (0,1)");
  if (dilation_ndc < 0.0) throw std::invalid_argument("build_mask: dilation must be >= 0");

  Mask3D mask;
  mask.nx = grid.nx;
  mask.ny = grid.ny;
  mask.nz = grid.nz;
  mask.extent = grid.extent;
  mask.dilation_ndc = dilation_ndc;
  mask.in.assign(grid.data.size(), 0);

  const Vec3d pitch = grid.pitch();
  const double rx = dilation_ndc / pitch.x;
  const double ry = dilation_ndc / pitch.y;
  const double rz = dilation_ndc / pitch.z;

  // Ball offsets in voxel units.
  struct Offset { int dx, dy, dz; };
  std::vector<Offset> ball;
  const int mx = static_cast<int>(std::floor(rx));
  const int my = static_cast<int>(std::floor(ry));
  const int mz = static_cast<int>(std::floor(rz));
  for (int dz = -mz; dz <= mz; ++dz)
    for (int dy = -my; dy <= my; ++dy)
      for (int dx = -mx; dx <= mx; ++dx) {
        const double ex = rx > 0 ? dx / rx : 0.0;
        const double ey = ry > 0 ? dy / ry : 0.0;
        const double ez = rz > 0 ? dz / rz : 0.0;
        if (ex * ex + ey * ey + ez * ez <= 1.0) ball.push_back({dx, dy, dz});
      }

  for (int k = 0; k < grid.nz; ++k)
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) {
        if (grid.at(i, j, k) <= threshold) continue;
        for (const Offset& o : ball) {
          const int x = i + o.dx, y = j + o.dy, z = k + o.dz;
          if (x < 0 || y < 0 || z < 0 || x >= grid.nx || y >= grid.ny || z >= grid.nz) continue;
          mask.in[mask.index(x, y, z)] = 1;
        }
      }
  return mask;
}

}  // namespace drr
