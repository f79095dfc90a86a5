#pragma once

#include <array>
#include <cmath>

#include "drr/vec.hpp"

namespace drr {

// Frequency encodings with six bands (2^0 .. 2^5).
inline constexpr int kEncodingBands = 6;
inline constexpr int kDensityEncodingWidth = 1 + 2 * kEncodingBands;       // 13
inline constexpr int kPositionEncodingWidth = 3 + 2 * 3 * kEncodingBands;  // 39

// [sigma, sin(2^i sigma), cos(2^i sigma), ...] for i = 0..5.
inline std::array<double, kDensityEncodingWidth> encode_density(double sigma) {
  std::array<double, kDensityEncodingWidth> e;
  e[0] = sigma;
  double s = sigma;
  for (int i = 0; i < kEncodingBands; ++i) {
    e[1 + 2 * i] = std::sin(s);
    e[2 + 2 * i] = std::cos(s);
    s *= 2.0;
  }
  return e;
}

inline std::array<double, kDensityEncodingWidth> encode_density_deriv(double sigma) {
  std::array<double, kDensityEncodingWidth> d;
  d[0] = 1.0;
  double s = sigma;
  double band = 1.0;
  for (int i = 0; i < kEncodingBands; ++i) {
    d[1 + 2 * i] = band * std::cos(s);
    d[2 + 2 * i] = -band * std::sin(s);
    s *= 2.0;
    band *= 2.0;
  }
  return d;
}

// [x, y, z, sin(2^i x), sin(2^i y), sin(2^i z), cos(2^i x), cos(2^i y),
//  cos(2^i z), ...] for i = 0..5.
inline std::array<double, kPositionEncodingWidth> encode_position(const Vec3d& p) {
  std::array<double, kPositionEncodingWidth> e;
  e[0] = p.x;
  e[1] = p.y;
  e[2] = p.z;
  double band = 1.0;
  for (int i = 0; i < kEncodingBands; ++i) {
    const int base = 3 + 6 * i;
    e[base + 0] = std::sin(band * p.x);
    e[base + 1] = std::sin(band * p.y);
    e[base + 2] = std::sin(band * p.z);
    e[base + 3] = std::cos(band * p.x);
    e[base + 4] = std::cos(band * p.y);
    e[base + 5] = std::cos(band * p.z);
    band *= 2.0;
  }
  return e;
}

// Tangents of the position encoding along x, y, z. Each encoding entry
// depends on a single coordinate, so the Jacobian is returned as (entry,
// axis, derivative) triples via three dense columns.
struct PositionEncodingJacobian {
  std::array<std::array<double, 3>, kPositionEncodingWidth> d;  // [entry][axis]
};

inline PositionEncodingJacobian encode_position_jacobian(const Vec3d& p) {
  PositionEncodingJacobian j;
  for (auto& row : j.d) row = {0.0, 0.0, 0.0};
  j.d[0][0] = 1.0;
  j.d[1][1] = 1.0;
  j.d[2][2] = 1.0;
  const double c[3] = {p.x, p.y, p.z};
  double band = 1.0;
  for (int i = 0; i < kEncodingBands; ++i) {
    const int base = 3 + 6 * i;
    for (int a = 0; a < 3; ++a) {
      j.d[base + a][a] = band * std::cos(band * c[a]);
      j.d[base + 3 + a][a] = -band * std::sin(band * c[a]);
    }
    band *= 2.0;
  }
  return j;
}

}  // namespace drr
