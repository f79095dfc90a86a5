#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "drr/field.hpp"
#include "drr/loss.hpp"
#include "drr/optim_types.hpp"
#include "drr/render.hpp"
#include "drr/rng.hpp"

namespace drr {

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Adam

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  long step = 0;
  std::vector<double> m, v;

  void init(std::size_t n) {
    step = 0;
    m.assign(n, 0.0);
    v.assign(n, 0.0);
  }
};

// Standard bias-corrected Adam update; deterministic. Throws
// NumericalError on a NaN gradient.
void adam_step(AdamState& state, std::span<const double> grads, std::span<double> params,
               const AdamConfig& cfg);

// ---------------------------------------------------------------------------
// Pose estimation (random init, variable normalization, plateau stop)

struct InitBounds {
  Vec3d angles_deg{30.0, 30.0, 30.0};
  Vec3d ndc{0.2, 0.2, 0.2};
};

// Target pose perturbed uniformly within the bounds, per-component.
Pose random_init_pose(const Pose& target, Rng& rng, const InitBounds& bounds = {});

// Per-DoF affine normalization box, order (ty, tx, tz, ux, uy, uz).
struct PoseBox {
  std::array<double, 6> lo{}, hi{};

  static PoseBox around(const Pose& center, const InitBounds& half_ranges);
};

std::array<double, 6> pose_to_array(const Pose& p);
Pose pose_from_array(const std::array<double, 6>& a);

// Affine map into [0,1]^6 over the box; values outside the box are allowed
// (not clamped) and show up outside the unit interval.
std::array<double, 6> normalize_pose(const Pose& pose, const PoseBox& box);
Pose denormalize_pose(const std::array<double, 6>& t, const PoseBox& box);
bool in_unit_box(const std::array<double, 6>& t);

enum class GradBackend { kTape, kDual };

struct PoseOptConfig {
  double lr = 0.03;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
  int max_iters = 300;
  int plateau_window = 50;
  double plateau_min_delta = 1e-6;
  LossKind loss = LossKind::kMi;
  MiConfig mi;
  RenderAlgorithm algorithm = RenderAlgorithm::kRayCast;
  double norm_constant = 1.0;
  InitBounds box_half_ranges;  // normalization box = init pose +- these
  GradBackend backend = GradBackend::kTape;

  void validate() const {
    if (plateau_window >= max_iters)
      throw std::invalid_argument("PoseOptConfig: plateau window must be below max iterations");
  }
};

enum class StopReason { kPlateau, kMaxIters, kNanLoss };

struct PoseIter {
  Pose pose;
  double loss = 0.0;
};

struct PoseTrace {
  std::vector<PoseIter> iters;
  Pose best_pose;
  double best_loss = 0.0;
  StopReason reason = StopReason::kMaxIters;
  std::string diagnostic;

  int iterations() const { return static_cast<int>(iters.size()); }
};

// Gradient descent over normalized pose variables: render -> loss ->
// gradient -> Adam step, tracking the best-loss pose. Stops on a plateau
// (no improvement beyond min-delta over the window) or at max iterations.
PoseTrace estimate_pose(const Image& target, const DensityField& field,
                        const RenderGeometry& geom, const Pose& init, const PoseOptConfig& cfg);

// ---------------------------------------------------------------------------
// Field training (NeTT / mNeRF) with early stopping on epoch-mean PSNR

struct TrainView {
  Image target;  // comparison-space ground truth
  Pose pose;
};

struct TrainConfig {
  double lr = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  int patience = 10;
  double min_delta = 1e-5;
  int max_epochs = 200;
  RenderAlgorithm algorithm = RenderAlgorithm::kRayCast;
  Vec3d loss_weights = kDefaultTrainingLossWeights;
  double norm_constant = 1.0;

  void validate() const {
    if (patience < 1) throw std::invalid_argument("TrainConfig: patience must be >= 1");
    if (max_epochs < 1) throw std::invalid_argument("TrainConfig: need at least one epoch");
  }
};

struct TrainLogRow {
  int epoch = 0;
  double mean_psnr = 0.0;
  double mean_mse = 0.0, mean_ffl = 0.0, mean_ssim = 0.0;
};

struct TrainResult {
  MlpWeights weights;  // best epoch-mean-PSNR weights
  double best_psnr = 0.0;
  int best_epoch = -1;
  int epochs_run = 0;
  std::vector<TrainLogRow> log;
  std::string stop_reason;
};

// Per epoch: shuffle views; per view render with current weights, compute
// the combined training loss, backpropagate to the network weights, Adam
// step. Stops when epoch-mean PSNR fails to improve by min_delta for
// `patience` epochs.
TrainResult train_field(SceneKind kind, std::span<const TrainView> views, const DenseGrid* grid,
                        const Mask3D* mask, const MlpArch& arch, std::uint64_t init_seed,
                        const RenderGeometry& geom, const TrainConfig& cfg, Rng& rng);

}  // namespace drr
