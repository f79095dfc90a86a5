#pragma once

#include <cstdint>
#include <vector>

#include "drr/vec.hpp"

namespace drr {

struct GridExtent {
  Vec3d lo{-1.0, -1.0, -1.0};
  Vec3d hi{1.0, 1.0, 1.0};
};

// Discretized density volume, values normalized to [0,1]. Cell-centered:
// voxel (i,j,k) holds the density at the center of its cell. Storage is
// x-fastest row-major, matching the on-disk format.
struct DenseGrid {
  int nx = 0, ny = 0, nz = 0;
  GridExtent extent;
  std::vector<float> data;

  DenseGrid() = default;
  DenseGrid(int nx_, int ny_, int nz_, GridExtent ext = {})
      : nx(nx_), ny(ny_), nz(nz_), extent(ext),
        data(static_cast<std::size_t>(nx_) * ny_ * nz_, 0.0f) {}

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(nx) * (static_cast<std::size_t>(j) +
                                           static_cast<std::size_t>(ny) * k);
  }
  float& at(int i, int j, int k) { return data[index(i, j, k)]; }
  float at(int i, int j, int k) const { return data[index(i, j, k)]; }

  Vec3d pitch() const {
    return {(extent.hi.x - extent.lo.x) / nx, (extent.hi.y - extent.lo.y) / ny,
            (extent.hi.z - extent.lo.z) / nz};
  }
  Vec3d voxel_center(int i, int j, int k) const {
    const Vec3d d = pitch();
    return {extent.lo.x + (i + 0.5) * d.x, extent.lo.y + (j + 0.5) * d.y,
            extent.lo.z + (k + 0.5) * d.z};
  }
};

struct FieldSample {
  double value = 0.0;
  Vec3d grad{};  // d(value)/d(query point)
};

// Trilinear interpolation of the 8 surrounding voxel centers; exactly 0
// outside the extent. Within the half-voxel boundary margin the edge value
// is clamped. The spatial gradient is piecewise constant per cell with
// discontinuities at voxel-center planes.
double sample_grid(const DenseGrid& grid, const Vec3d& p);
FieldSample sample_grid_grad(const DenseGrid& grid, const Vec3d& p);

}  // namespace drr
