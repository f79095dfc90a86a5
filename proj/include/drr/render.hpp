#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "drr/field.hpp"
#include "drr/geometry.hpp"
#include "drr/image.hpp"
#include "drr/rng.hpp"

namespace drr {

enum class RenderAlgorithm { kRayCast, kVolume };
enum class RenderOutput { kAbsorbance, kIntensity };
enum class SampleMode { kMidpoint, kStratified };

// Samples along one ray: t values strictly increasing, spacings positive.
// The last spacing uses far - t_N + half bin width, which reduces to the
// uniform (far-near)/N for midpoint sampling.
template <class S>
struct RaySamples {
  std::vector<double> t;
  std::vector<double> delta;
  std::vector<S> sigma;
};

template <class S>
void sample_along_ray(const DensityField& field, const Vec3<S>& origin, const Vec3<S>& dir,
                      double near, double far, int n, SampleMode mode, Rng* rng,
                      RaySamples<S>& out) {
  if (!(near < far)) throw std::invalid_argument("sample_along_ray: need near < far");
  if (n < 2) throw std::invalid_argument("sample_along_ray: need at least 2 samples");
  if (mode == SampleMode::kStratified && !rng)
    throw std::invalid_argument("sample_along_ray: stratified mode needs an rng");
  const double h = (far - near) / n;
  out.t.resize(static_cast<std::size_t>(n));
  out.delta.resize(static_cast<std::size_t>(n));
  out.sigma.clear();
  out.sigma.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    out.t[static_cast<std::size_t>(i)] =
        near + (i + (mode == SampleMode::kMidpoint ? 0.5 : rng->uniform01())) * h;
  for (int i = 0; i + 1 < n; ++i)
    out.delta[static_cast<std::size_t>(i)] = out.t[static_cast<std::size_t>(i) + 1] - out.t[static_cast<std::size_t>(i)];
  out.delta[static_cast<std::size_t>(n) - 1] = far - out.t[static_cast<std::size_t>(n) - 1] + 0.5 * h;
  for (int i = 0; i < n; ++i) {
    const double t = out.t[static_cast<std::size_t>(i)];
    const Vec3<S> p{axpy(t, dir.x, origin.x), axpy(t, dir.y, origin.y),
                    axpy(t, dir.z, origin.z)};
    out.sigma.push_back(field_sample(field, p));
  }
}

template <class S>
RaySamples<S> sample_along_ray(const DensityField& field, const Vec3<S>& origin,
                               const Vec3<S>& dir, double near, double far, int n,
                               SampleMode mode = SampleMode::kMidpoint, Rng* rng = nullptr) {
  RaySamples<S> out;
  sample_along_ray(field, origin, dir, near, far, n, mode, rng, out);
  return out;
}

// Beer-Lambert absorbance A = sum sigma_i delta_i.
template <class S>
S ray_cast_absorbance(const RaySamples<S>& samples) {
  S acc(0.0);
  for (std::size_t i = 0; i < samples.sigma.size(); ++i)
    acc = axpy(samples.delta[i], samples.sigma[i], acc);
  return acc;
}

// I = i0 * exp(-A).
template <class S>
S absorbance_to_intensity(const S& absorbance, double i0 = 1.0) {
  if (i0 <= 0.0) throw std::invalid_argument("absorbance_to_intensity: i0 must be positive");
  return exp(-absorbance) * S(i0);
}

// Emission-absorption integral I = sum alpha_i T_i sigma_i with T_1 = 1.
template <class S>
S volume_render_intensity(const RaySamples<S>& samples) {
  S transmittance(1.0);
  S intensity(0.0);
  for (std::size_t i = 0; i < samples.sigma.size(); ++i) {
    const S att = exp(samples.sigma[i] * S(-samples.delta[i]));
    const S weight = (S(1.0) - att) * transmittance;
    intensity = madd(weight, samples.sigma[i], intensity);
    transmittance = transmittance * att;
  }
  return intensity;
}

// Full DRR synthesis: one ray per pixel, midpoint sampling deterministic.
// Ray-cast output is absorbance or detector intensity (i0 = 1); the volume
// algorithm natively produces a luminance-style intensity and has no
// absorbance output.
template <class S>
ImageT<S> render_drr(const DensityField& field, const PoseT<S>& pose,
                     const RenderGeometry& geom,
                     RenderAlgorithm algorithm = RenderAlgorithm::kRayCast,
                     RenderOutput output = RenderOutput::kAbsorbance,
                     SampleMode mode = SampleMode::kMidpoint, Rng* rng = nullptr) {
  geom.validate();
  if (algorithm == RenderAlgorithm::kVolume && output == RenderOutput::kAbsorbance)
    throw std::invalid_argument("render_drr: volume rendering has no absorbance output");
  const RayBundle<S> rays = pose_to_rays(pose, geom);
  ImageT<S> img(geom.image_w, geom.image_h);
  RaySamples<S> samples;
  for (std::size_t i = 0; i < rays.dirs.size(); ++i) {
    sample_along_ray(field, rays.origin, rays.dirs[i], rays.near[i], rays.far[i],
                     geom.n_samples, mode, rng, samples);
    if (algorithm == RenderAlgorithm::kRayCast) {
      const S a = ray_cast_absorbance(samples);
      img.pix[i] = output == RenderOutput::kAbsorbance ? a : absorbance_to_intensity(a);
    } else {
      img.pix[i] = volume_render_intensity(samples);
    }
  }
  return img;
}

// Comparison-space image used by pose estimation and training: the
// algorithm's native quantity (ray-cast absorbance / volume luminance)
// scaled by a frozen per-configuration constant. Not clamped, so gradients
// survive past 1; storage paths clamp separately.
template <class S>
ImageT<S> render_comparison_image(const DensityField& field, const PoseT<S>& pose,
                                  const RenderGeometry& geom, RenderAlgorithm algorithm,
                                  double norm_constant, SampleMode mode = SampleMode::kMidpoint,
                                  Rng* rng = nullptr) {
  ImageT<S> img = render_drr(field, pose, geom, algorithm,
                             algorithm == RenderAlgorithm::kRayCast
                                 ? RenderOutput::kAbsorbance
                                 : RenderOutput::kIntensity,
                             mode, rng);
  const double scale = 1.0 / norm_constant;
  for (S& p : img.pix) p = p * S(scale);
  return img;
}

// 99.9th-percentile normalization constant (nearest rank) over a rendered
// ground-truth sequence; frozen per configuration afterwards.
double absorbance_normalization_constant(const std::vector<Image>& images,
                                         double quantile = 0.999);

}  // namespace drr
