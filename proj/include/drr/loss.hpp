#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "drr/image.hpp"

namespace drr {

enum class PixelLossKind { kL1, kMse };

enum class LossKind { kL1, kMse, kSsim, kDice, kMi };

const char* loss_name(LossKind kind);
LossKind loss_from_name(const std::string& name);

struct MiConfig {
  int bins = 32;
  double bandwidth = 1.0 / 32.0;  // Gaussian Parzen kernel, one bin width

  void validate() const {
    if (bins < 2) throw std::invalid_argument("MiConfig: need at least 2 bins");
    if (bandwidth <= 0.0) throw std::invalid_argument("MiConfig: bandwidth must be positive");
  }
};

namespace lossdetail {

template <class SA, class SB>
void check_dims(const ImageT<SA>& a, const ImageT<SB>& b, const char* op) {
  if (a.width != b.width || a.height != b.height)
    throw std::invalid_argument(std::string(op) + ": image dimension mismatch");
}

std::vector<double> gaussian_kernel(int size, double sigma);

}  // namespace lossdetail

// Mean absolute / mean squared pixel difference.
template <class S>
S pixel_loss(PixelLossKind kind, const ImageT<S>& a, const ImageT<S>& b) {
  lossdetail::check_dims(a, b, "pixel_loss");
  S acc(0.0);
  for (std::size_t i = 0; i < a.pix.size(); ++i) {
    const S d = a.pix[i] - b.pix[i];
    acc = acc + (kind == PixelLossKind::kL1 ? abs(d) : d * d);
  }
  return acc * S(1.0 / static_cast<double>(a.pix.size()));
}

// Separable valid-mode convolution with a 1D kernel applied along rows
// then columns.
template <class S>
ImageT<S> conv_separable_valid(const ImageT<S>& img, const std::vector<double>& kernel) {
  const int k = static_cast<int>(kernel.size());
  if (img.width < k || img.height < k)
    throw std::invalid_argument("conv_separable_valid: image smaller than kernel");
  ImageT<S> rows(img.width - k + 1, img.height);
  for (int r = 0; r < img.height; ++r)
    for (int c = 0; c < rows.width; ++c) {
      S acc(0.0);
      for (int i = 0; i < k; ++i) acc = axpy(kernel[static_cast<std::size_t>(i)], img.at(r, c + i), acc);
      rows.at(r, c) = acc;
    }
  ImageT<S> out(rows.width, img.height - k + 1);
  for (int r = 0; r < out.height; ++r)
    for (int c = 0; c < out.width; ++c) {
      S acc(0.0);
      for (int i = 0; i < k; ++i) acc = axpy(kernel[static_cast<std::size_t>(i)], rows.at(r + i, c), acc);
      out.at(r, c) = acc;
    }
  return out;
}

// 1 - mean local SSIM, Gaussian window 11x11 (sigma 1.5), valid windows
// only, stability constants for range-1 images.
template <class S>
S ssim_loss(const ImageT<S>& a, const ImageT<S>& b) {
  lossdetail::check_dims(a, b, "ssim_loss");
  constexpr int kWindow = 11;
  constexpr double kC1 = 0.01 * 0.01;
  constexpr double kC2 = 0.03 * 0.03;
  if (a.width < kWindow || a.height < kWindow)
    throw std::invalid_argument("ssim_loss: image smaller than the 11x11 window");
  const std::vector<double> kernel = lossdetail::gaussian_kernel(kWindow, 1.5);

  ImageT<S> aa(a.width, a.height), bb(a.width, a.height), ab(a.width, a.height);
  for (std::size_t i = 0; i < a.pix.size(); ++i) {
    aa.pix[i] = a.pix[i] * a.pix[i];
    bb.pix[i] = b.pix[i] * b.pix[i];
    ab.pix[i] = a.pix[i] * b.pix[i];
  }
  const ImageT<S> mu_a = conv_separable_valid(a, kernel);
  const ImageT<S> mu_b = conv_separable_valid(b, kernel);
  const ImageT<S> s_aa = conv_separable_valid(aa, kernel);
  const ImageT<S> s_bb = conv_separable_valid(bb, kernel);
  const ImageT<S> s_ab = conv_separable_valid(ab, kernel);

  S acc(0.0);
  for (std::size_t i = 0; i < mu_a.pix.size(); ++i) {
    const S& ma = mu_a.pix[i];
    const S& mb = mu_b.pix[i];
    const S va = s_aa.pix[i] - ma * ma;
    const S vb = s_bb.pix[i] - mb * mb;
    const S cab = s_ab.pix[i] - ma * mb;
    const S num = (ma * mb * S(2.0) + S(kC1)) * (cab * S(2.0) + S(kC2));
    const S den = (ma * ma + mb * mb + S(kC1)) * (va + vb + S(kC2));
    acc = acc + num / den;
  }
  return S(1.0) - acc * S(1.0 / static_cast<double>(mu_a.pix.size()));
}

// 1 - (2*sum(ab)+eps) / (sum(a^2)+sum(b^2)+eps), eps = 1e-6.
template <class S>
S soft_dice_loss(const ImageT<S>& a, const ImageT<S>& b) {
  lossdetail::check_dims(a, b, "soft_dice_loss");
  constexpr double kEps = 1e-6;
  S inter(0.0), na(0.0), nb(0.0);
  for (std::size_t i = 0; i < a.pix.size(); ++i) {
    inter = madd(a.pix[i], b.pix[i], inter);
    na = madd(a.pix[i], a.pix[i], na);
    nb = madd(b.pix[i], b.pix[i], nb);
  }
  return S(1.0) - (inter * S(2.0) + S(kEps)) / (na + nb + S(kEps));
}

// Negative mutual information over a joint soft histogram: each pixel pair
// adds Gaussian-kernel weights to nearby bin centers (truncated at three
// bandwidths), the joint histogram is normalized to sum 1, and
// MI = sum P log(P / (Pa Pb)). Pixels are clamped to [0,1] before binning
// (min/max subgradients). Differentiable w.r.t. both images.
template <class S>
S mutual_information_loss(const ImageT<S>& a, const ImageT<S>& b, const MiConfig& cfg = {}) {
  lossdetail::check_dims(a, b, "mutual_information_loss");
  cfg.validate();
  const int nbins = cfg.bins;
  const double bw = cfg.bandwidth;
  const double inv2bw2 = 1.0 / (2.0 * bw * bw);
  const double radius = 3.0 * bw;

  std::vector<S> joint(static_cast<std::size_t>(nbins) * nbins, S(0.0));
  std::vector<S> wa, wb;
  std::vector<int> ia, ib;
  auto kernels = [&](const S& raw, std::vector<S>& w, std::vector<int>& idx) {
    w.clear();
    idx.clear();
    const S x = min(max(raw, S(0.0)), S(1.0));
    const double xv = value_of(x);
    int k0 = static_cast<int>(std::floor((xv - radius) * nbins - 0.5));
    int k1 = static_cast<int>(std::ceil((xv + radius) * nbins - 0.5));
    if (k0 < 0) k0 = 0;
    if (k1 > nbins - 1) k1 = nbins - 1;
    for (int k = k0; k <= k1; ++k) {
      const double center = (k + 0.5) / nbins;
      const S d = x - S(center);
      w.push_back(exp(d * d * S(-inv2bw2)));
      idx.push_back(k);
    }
  };

  for (std::size_t p = 0; p < a.pix.size(); ++p) {
    kernels(a.pix[p], wa, ia);
    kernels(b.pix[p], wb, ib);
    for (std::size_t i = 0; i < wa.size(); ++i)
      for (std::size_t j = 0; j < wb.size(); ++j) {
        S& bin = joint[static_cast<std::size_t>(ia[i]) * nbins + ib[j]];
        bin = madd(wa[i], wb[j], bin);
      }
  }

  S total(0.0);
  for (const S& v : joint) total = total + v;
  const S inv_total = S(1.0) / total;

  std::vector<S> pa(static_cast<std::size_t>(nbins), S(0.0));
  std::vector<S> pb(static_cast<std::size_t>(nbins), S(0.0));
  for (int i = 0; i < nbins; ++i)
    for (int j = 0; j < nbins; ++j) {
      const S& v = joint[static_cast<std::size_t>(i) * nbins + j];
      pa[static_cast<std::size_t>(i)] = pa[static_cast<std::size_t>(i)] + v;
      pb[static_cast<std::size_t>(j)] = pb[static_cast<std::size_t>(j)] + v;
    }

  S mi(0.0);
  for (int i = 0; i < nbins; ++i) {
    if (value_of(pa[static_cast<std::size_t>(i)]) == 0.0) continue;
    for (int j = 0; j < nbins; ++j) {
      const S& v = joint[static_cast<std::size_t>(i) * nbins + j];
      if (value_of(v) == 0.0 || value_of(pb[static_cast<std::size_t>(j)]) == 0.0) continue;
      const S p = v * inv_total;
      const S ratio = (v * total) / (pa[static_cast<std::size_t>(i)] * pb[static_cast<std::size_t>(j)]);
      mi = madd(p, log(ratio), mi);
    }
  }
  return -mi;
}

namespace lossdetail {

// In-place radix-2 FFT over interleaved (re, im) pairs; n is a power of two.
template <class S>
void fft_pow2(std::vector<S>& re, std::vector<S>& im) {
  const std::size_t n = re.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {  // bit reversal
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * 3.14159265358979323846 / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const double wr = std::cos(ang * static_cast<double>(k));
        const double wi = std::sin(ang * static_cast<double>(k));
        const std::size_t u = i + k, v = i + k + len / 2;
        const S tr = re[v] * S(wr) - im[v] * S(wi);
        const S ti = re[v] * S(wi) + im[v] * S(wr);
        re[v] = re[u] - tr;
        im[v] = im[u] - ti;
        re[u] = re[u] + tr;
        im[u] = im[u] + ti;
      }
    }
  }
}

template <class S>
void fft2_image(const ImageT<S>& img, std::vector<S>& re, std::vector<S>& im) {
  const int w = img.width, h = img.height;
  re.assign(img.pix.begin(), img.pix.end());
  im.assign(img.pix.size(), S(0.0));
  std::vector<S> row_re(static_cast<std::size_t>(w)), row_im(static_cast<std::size_t>(w));
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      row_re[static_cast<std::size_t>(c)] = re[static_cast<std::size_t>(r) * w + c];
      row_im[static_cast<std::size_t>(c)] = im[static_cast<std::size_t>(r) * w + c];
    }
    fft_pow2(row_re, row_im);
    for (int c = 0; c < w; ++c) {
      re[static_cast<std::size_t>(r) * w + c] = row_re[static_cast<std::size_t>(c)];
      im[static_cast<std::size_t>(r) * w + c] = row_im[static_cast<std::size_t>(c)];
    }
  }
  std::vector<S> col_re(static_cast<std::size_t>(h)), col_im(static_cast<std::size_t>(h));
  for (int c = 0; c < w; ++c) {
    for (int r = 0; r < h; ++r) {
      col_re[static_cast<std::size_t>(r)] = re[static_cast<std::size_t>(r) * w + c];
      col_im[static_cast<std::size_t>(r)] = im[static_cast<std::size_t>(r) * w + c];
    }
    fft_pow2(col_re, col_im);
    for (int r = 0; r < h; ++r) {
      re[static_cast<std::size_t>(r) * w + c] = col_re[static_cast<std::size_t>(r)];
      im[static_cast<std::size_t>(r) * w + c] = col_im[static_cast<std::size_t>(r)];
    }
  }
}

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace lossdetail

// Frequency-domain focal loss: mean over frequencies of w * |F_a - F_b|^2
// with the dynamic spectrum weight w = |F_a - F_b| normalized to [0,1] by
// its maximum. The weight matrix is computed from forward values only (no
// gradient flows through it). Requires power-of-two dimensions.
template <class S>
S focal_frequency_loss(const ImageT<S>& a, const ImageT<S>& b) {
  lossdetail::check_dims(a, b, "focal_frequency_loss");
  if (!lossdetail::is_pow2(a.width) || !lossdetail::is_pow2(a.height))
    throw std::invalid_argument("focal_frequency_loss: dimensions must be powers of two");
  std::vector<S> are, aim, bre, bim;
  lossdetail::fft2_image(a, are, aim);
  lossdetail::fft2_image(b, bre, bim);

  const std::size_t n = are.size();
  std::vector<S> mag2(n);
  std::vector<double> weight(n);
  double max_mag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const S dr = are[i] - bre[i];
    const S di = aim[i] - bim[i];
    mag2[i] = dr * dr + di * di;
    weight[i] = std::sqrt(value_of(mag2[i]));
    max_mag = std::max(max_mag, weight[i]);
  }
  S acc(0.0);
  if (max_mag > 0.0) {
    const double inv = 1.0 / max_mag;
    for (std::size_t i = 0; i < n; ++i) acc = axpy(weight[i] * inv, mag2[i], acc);
  }
  return acc * S(1.0 / static_cast<double>(n));
}

// Combined training loss: w1*MSE + w2*FFL + w3*(1 - SSIM).
template <class S>
S training_loss(const ImageT<S>& a, const ImageT<S>& b, const Vec3d& weights) {
  if (weights.x < 0.0 || weights.y < 0.0 || weights.z < 0.0)
    throw std::invalid_argument("training_loss: weights must be non-negative");
  S acc(0.0);
  if (weights.x > 0.0) acc = acc + pixel_loss(PixelLossKind::kMse, a, b) * S(weights.x);
  if (weights.y > 0.0) acc = acc + focal_frequency_loss(a, b) * S(weights.y);
  if (weights.z > 0.0) acc = acc + ssim_loss(a, b) * S(weights.z);
  return acc;
}

inline constexpr Vec3d kDefaultTrainingLossWeights{1.0, 1.0, 0.1};

// 10*log10(1/MSE) for range-1 images; +infinity for identical images.
double psnr(const Image& a, const Image& b);

// Dispatch used by pose optimization and the sweep/experiment drivers.
template <class S>
S image_loss(LossKind kind, const ImageT<S>& a, const ImageT<S>& b, const MiConfig& mi = {}) {
  switch (kind) {
    case LossKind::kL1: return pixel_loss(PixelLossKind::kL1, a, b);
    case LossKind::kMse: return pixel_loss(PixelLossKind::kMse, a, b);
    case LossKind::kSsim: return ssim_loss(a, b);
    case LossKind::kDice: return soft_dice_loss(a, b);
    case LossKind::kMi: return mutual_information_loss(a, b, mi);
  }
  throw std::logic_error("image_loss: unknown kind");
}

}  // namespace drr
