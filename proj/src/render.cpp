#include "drr/render.hpp"

#include <algorithm>
#include <cmath>

namespace drr {

double absorbance_normalization_constant(const std::vector<Image>& images, double quantile) {
  std::vector<double> all;
  std::size_t total = 0;
  for (const Image& img : images) total += img.pix.size();
  all.reserve(total);
  for (const Image& img : images) all.insert(all.end(), img.pix.begin(), img.pix.end());
  if (all.empty()) return 1.0;
  std::size_t rank = static_cast<std::size_t>(std::ceil(quantile * static_cast<double>(all.size())));
  if (rank == 0) rank = 1;
  if (rank > all.size()) rank = all.size();
  std::nth_element(all.begin(), all.begin() + (rank - 1), all.end());
  return std::max(all[rank - 1], 1e-12);
}

Image resize_area(const Image& img, int out_w, int out_h) {
  if (out_w <= 0 || out_h <= 0) throw std::invalid_argument("resize_area: bad dimensions");
  if (out_w == img.width && out_h == img.height) return img;
  Image out(out_w, out_h);
  const double sx = static_cast<double>(img.width) / out_w;
  const double sy = static_cast<double>(img.height) / out_h;
  for (int r = 0; r < out_h; ++r) {
    const double y0 = r * sy, y1 = (r + 1) * sy;
    for (int c = 0; c < out_w; ++c) {
      const double x0 = c * sx, x1 = (c + 1) * sx;
      double acc = 0.0;
      for (int ry = static_cast<int>(y0); ry < img.height && ry < y1; ++ry) {
        const double wy = std::min<double>(ry + 1, y1) - std::max<double>(ry, y0);
        if (wy <= 0.0) continue;
        for (int rx = static_cast<int>(x0); rx < img.width && rx < x1; ++rx) {
          const double wx = std::min<double>(rx + 1, x1) - std::max<double>(rx, x0);
          if (wx <= 0.0) continue;
          acc += wx * wy * img.at(ry, rx);
        }
      }
      out.at(r, c) = acc / (sx * sy);
    }
  }
  return out;
}

}  // namespace drr
