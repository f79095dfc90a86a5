#pragma once

#include <cstdint>
#include <vector>

#include "drr/grid.hpp"

namespace drr {

// Boolean volume aligned with a DenseGrid. Queries outside the extent are
// always masked (false).
struct Mask3D {
  int nx = 0, ny = 0, nz = 0;
  GridExtent extent;
  double dilation_ndc = 0.0;
  std::vector<std::uint8_t> in;

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(nx) * (static_cast<std::size_t>(j) +
                                           static_cast<std::size_t>(ny) * k);
  }

  bool contains(const Vec3d& p) const {
    if (p.x < extent.lo.x || p.x > extent.hi.x || p.y < extent.lo.y || p.y > extent.hi.y ||
        p.z < extent.lo.z || p.z > extent.hi.z)
      return false;
    const int i = cell(p.x, extent.lo.x, extent.hi.x, nx);
    const int j = cell(p.y, extent.lo.y, extent.hi.y, ny);
    const int k = cell(p.z, extent.lo.z, extent.hi.z, nz);
    return in[index(i, j, k)] != 0;
  }

 private:
  static int cell(double p, double lo, double hi, int n) {
    int i = static_cast<int>((p - lo) / (hi - lo) * n);
    if (i < 0) i = 0;
    if (i >= n) i = n - 1;
    return i;
  }
};

// Thresholds the grid (density > threshold) and dilates by a ball of the
// given radius; the radius is converted to voxels through the grid pitch.
// threshold must lie in (0,1).
Mask3D build_mask(const DenseGrid& grid, double threshold, double dilation_ndc);

}  // namespace drr
