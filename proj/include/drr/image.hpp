#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "drr/scalar.hpp"

namespace drr {

// Row-major 2D image; pixel (0,0) is top-left. Stored intensities are
// normalized to [0,1] after the documented normalization step; raw
// absorbance/intensity images use the same container.
template <class S>
struct ImageT {
  int width = 0;
  int height = 0;
  std::vector<S> pix;

  ImageT() = default;
  ImageT(int w, int h) : width(w), height(h), pix(static_cast<std::size_t>(w) * h, S(0.0)) {}

  S& at(int row, int col) { return pix[static_cast<std::size_t>(row) * width + col]; }
  const S& at(int row, int col) const {
    return pix[static_cast<std::size_t>(row) * width + col];
  }
  std::size_t size() const { return pix.size(); }
};

using Image = ImageT<double>;

template <class S>
Image to_plain(const ImageT<S>& img) {
  Image out(img.width, img.height);
  for (std::size_t i = 0; i < img.pix.size(); ++i) out.pix[i] = value_of(img.pix[i]);
  return out;
}

inline void clamp01(Image& img) {
  for (double& p : img.pix) p = std::clamp(p, 0.0, 1.0);
}

// Area-average downsampling by an integer factor (dimensions must divide).
inline Image downsample_area(const Image& img, int factor) {
  if (factor <= 0 || img.width % factor || img.height % factor)
    throw std::invalid_argument("downsample_area: factor must divide dimensions");
  Image out(img.width / factor, img.height / factor);
  const double inv = 1.0 / (factor * factor);
  for (int r = 0; r < out.height; ++r)
    for (int c = 0; c < out.width; ++c) {
      double acc = 0.0;
      for (int dr = 0; dr < factor; ++dr)
        for (int dc = 0; dc < factor; ++dc) acc += img.at(r * factor + dr, c * factor + dc);
      out.at(r, c) = acc * inv;
    }
  return out;
}

// Area-average resize to arbitrary dimensions (box filter over fractional
// source cells).
Image resize_area(const Image& img, int out_w, int out_h);

inline double mean_abs_diff(const Image& a, const Image& b) {
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument("mean_abs_diff: dimension mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.pix.size(); ++i) acc += std::abs(a.pix[i] - b.pix[i]);
  return acc / static_cast<double>(a.pix.size());
}

}  // namespace drr
