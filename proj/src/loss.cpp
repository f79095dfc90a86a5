#include "drr/loss.hpp"

#include <cmath>

namespace drr {

const char* loss_name(LossKind kind) {
  switch (kind) {
    case LossKind::kL1: return "l1";
    case LossKind::kMse: return "mse";
    case LossKind::kSsim: return "ssim";
    case LossKind::kDice: return "dice";
    case LossKind::kMi: return "mi";
  }
  return "?";
}

LossKind loss_from_name(const std::string& name) {
  if (name == "l1") return LossKind::kL1;
  if (name == "mse") return LossKind::kMse;
  if (name == "ssim") return LossKind::kSsim;
  if (name == "dice") return LossKind::kDice;
  if (name == "mi") return LossKind::kMi;
  throw std::invalid_argument("unknown loss name: " + name);
}

namespace lossdetail {

std::vector<double> gaussian_kernel(int size, double sigma) {
  std::vector<double> k(static_cast<std::size_t>(size));
  const double c = 0.5 * (size - 1);
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    k[static_cast<std::size_t>(i)] = std::exp(-(i - c) * (i - c) / (2.0 * sigma * sigma));
    sum += k[static_cast<std::size_t>(i)];
  }
  for (double& v : k) v /= sum;
  return k;
}

}  // namespace lossdetail

double psnr(const Image& a, const Image& b) {
  const double mse = pixel_loss(PixelLossKind::kMse, a, b);
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

}  // namespace drr
