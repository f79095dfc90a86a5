#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace drr {

enum class MlpMode { kTrain, kInfer };

// One Dense(+ReLU)(+BatchNorm) block. Weights are row-major (out x in).
struct MlpLayer {
  int in = 0;
  int out = 0;
  std::vector<double> w;
  std::vector<double> b;
  bool relu = true;
  bool batch_norm = false;
  bool concat_encoding = false;  // input = [previous output ; encoding]
  std::vector<double> bn_gamma, bn_beta, bn_mean, bn_var;
};

struct MlpWeights {
  int encoding_width = 0;
  std::vector<MlpLayer> layers;

  void validate() const;
};

inline constexpr double kBnEpsilon = 1e-5;
inline constexpr double kBnMomentum = 0.1;  // running = (1-m)*running + m*batch

// Single-sample forward. Infer mode normalizes with the frozen running
// statistics and is deterministic; train mode uses batch-of-one semantics
// (normalized activations collapse to the BN shift).
double mlp_forward(const MlpWeights& w, std::span<const double> x, MlpMode mode = MlpMode::kInfer);

// Forward pass carrying K directional derivatives of the input (infer
// mode). Used for spatial gradients of neural density fields.
template <int K>
struct MlpJvpResult {
  double value = 0.0;
  std::array<double, K> deriv{};
};

MlpJvpResult<1> mlp_forward_jvp1(const MlpWeights& w, std::span<const double> x,
                                 std::span<const double> dx);
MlpJvpResult<3> mlp_forward_jvp3(const MlpWeights& w, std::span<const double> x,
                                 std::span<const std::array<double, 3>> dx);

// ---------------------------------------------------------------------------
// Architecture / initialization

struct MlpArch {
  std::vector<int> hidden;
  std::vector<int> concat_layers;  // hidden-layer indices receiving the skip
  bool batch_norm = true;
};

// Density-tuning network: 4 hidden layers of width 64, skip concatenating
// the 13-wide encoding before the final hidden layer.
MlpArch nett_default_arch();
// Coordinate network: 6 hidden layers of width 128, skips at layers 3 and 5
// (encoding width 39).
MlpArch mnerf_default_arch();

// He-normal weights, zero biases, identity batch-norm statistics.
MlpWeights make_mlp(const MlpArch& arch, int encoding_width, std::uint64_t seed);

// Trainable parameters are (w, b, gamma, beta) per layer, in layer order;
// running statistics are not trained.
std::size_t trainable_count(const MlpWeights& w);
void flatten_trainable(const MlpWeights& w, std::vector<double>& out);
void unflatten_trainable(std::span<const double> flat, MlpWeights& w);

// ---------------------------------------------------------------------------
// Batched training evaluator

struct MlpGrads {
  std::vector<double> flat;  // same layout as flatten_trainable

  void resize_like(const MlpWeights& w) { flat.assign(trainable_count(w), 0.0); }
};

// Forward/backward over a batch of samples with shared batch-norm
// statistics (one batch = one view's sampled points). Scratch buffers are
// reused across calls; an instance is confined to one training loop.
class MlpBatch {
 public:
  // inputs: n rows of w.encoding_width values. Train mode updates the
  // running statistics in `w`.
  void forward(MlpWeights& w, std::span<const double> inputs, int n, MlpMode mode);

  std::span<const double> outputs() const { return outputs_; }

  // dL/d(output), length n; accumulates parameter gradients into `grads`.
  void backward(const MlpWeights& w, std::span<const double> dout, MlpGrads& grads);

 private:
  struct LayerCache {
    std::vector<double> z;   // pre-activation, n x out
    std::vector<double> y;   // block output, n x out
    std::vector<double> mu, var;
  };
  int n_ = 0;
  MlpMode mode_ = MlpMode::kInfer;
  std::vector<double> enc_;  // n x encoding_width copy of the raw inputs
  std::vector<LayerCache> cache_;
  std::vector<double> outputs_;
  std::vector<double> scratch_in_, scratch_d_;
};

}  // namespace drr
