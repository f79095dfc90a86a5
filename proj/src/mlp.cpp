#include "drr/mlp.hpp"

#include <algorithm>
#include <cmath>

#include "drr/rng.hpp"

namespace drr {

namespace {

int layer_input_width(const MlpWeights& w, std::size_t l) {
  if (l == 0) return w.encoding_width;
  int in = w.layers[l - 1].out;
  if (w.layers[l].concat_encoding) in += w.encoding_width;
  return in;
}

}  // namespace

void MlpWeights::validate() const {
  if (encoding_width <= 0) throw std::invalid_argument("mlp: encoding width must be positive");
  if (layers.empty()) throw std::invalid_argument("mlp: needs at least one layer");
  if (layers.front().concat_encoding)
    throw std::invalid_argument("mlp: first layer input is already the encoding");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const MlpLayer& layer = layers[l];
    const int expect_in = layer_input_width(*this, l);
    if (layer.in != expect_in || layer.out <= 0)
      throw std::invalid_argument("mlp: layer " + std::to_string(l) + " shape mismatch");
    if (layer.w.size() != static_cast<std::size_t>(layer.in) * layer.out ||
        layer.b.size() != static_cast<std::size_t>(layer.out))
      throw std::invalid_argument("mlp: layer " + std::to_string(l) + " weight size mismatch");
    if (layer.batch_norm) {
      const auto n = static_cast<std::size_t>(layer.out);
      if (layer.bn_gamma.size() != n || layer.bn_beta.size() != n ||
          layer.bn_mean.size() != n || layer.bn_var.size() != n)
        throw std::invalid_argument("mlp: layer " + std::to_string(l) + " norm size mismatch");
    }
  }
  if (layers.back().out != 1) throw std::invalid_argument("mlp: output must be scalar");
  if (!layers.back().relu)
    throw std::invalid_argument("mlp: output activation must be non-negative");
}

double mlp_forward(const MlpWeights& w, std::span<const double> x, MlpMode mode) {
  if (static_cast<int>(x.size()) != w.encoding_width)
    throw std::invalid_argument("mlp_forward: input width mismatch");
  thread_local std::vector<double> cur, nxt;
  cur.assign(x.begin(), x.end());
  for (const MlpLayer& layer : w.layers) {
    if (layer.concat_encoding) cur.insert(cur.end(), x.begin(), x.end());
    nxt.assign(static_cast<std::size_t>(layer.out), 0.0);
    for (int j = 0; j < layer.out; ++j) {
      const double* wr = layer.w.data() + static_cast<std::size_t>(j) * layer.in;
      double acc = layer.b[j];
      for (int k = 0; k < layer.in; ++k) acc += wr[k] * cur[k];
      if (layer.relu && acc < 0.0) acc = 0.0;
      if (layer.batch_norm) {
        if (mode == MlpMode::kInfer) {
          acc = layer.bn_gamma[j] * (acc - layer.bn_mean[j]) /
                    std::sqrt(layer.bn_var[j] + kBnEpsilon) +
                layer.bn_beta[j];
        } else {
          acc = layer.bn_beta[j];  // batch of one: normalized activation is 0
        }
      }
      nxt[j] = acc;
    }
    cur.swap(nxt);
  }
  return cur[0];
}

namespace {

template <int K, class TanIn>
MlpJvpResult<K> forward_jvp(const MlpWeights& w, std::span<const double> x, const TanIn& dx) {
  thread_local std::vector<double> cur, nxt, dcur, dnxt;
  const int ew = w.encoding_width;
  cur.assign(x.begin(), x.end());
  dcur.assign(static_cast<std::size_t>(ew) * K, 0.0);
  for (int k = 0; k < ew; ++k)
    for (int t = 0; t < K; ++t) dcur[static_cast<std::size_t>(k) * K + t] = dx(k, t);

  for (const MlpLayer& layer : w.layers) {
    if (layer.concat_encoding) {
      cur.insert(cur.end(), x.begin(), x.end());
      const std::size_t base = dcur.size();
      dcur.resize(base + static_cast<std::size_t>(ew) * K);
      for (int k = 0; k < ew; ++k)
        for (int t = 0; t < K; ++t) dcur[base + static_cast<std::size_t>(k) * K + t] = dx(k, t);
    }
    nxt.assign(static_cast<std::size_t>(layer.out), 0.0);
    dnxt.assign(static_cast<std::size_t>(layer.out) * K, 0.0);
    for (int j = 0; j < layer.out; ++j) {
      const double* wr = layer.w.data() + static_cast<std::size_t>(j) * layer.in;
      double acc = layer.b[j];
      double dacc[K] = {};
      for (int k = 0; k < layer.in; ++k) {
        acc += wr[k] * cur[k];
        for (int t = 0; t < K; ++t) dacc[t] += wr[k] * dcur[static_cast<std::size_t>(k) * K + t];
      }
      if (layer.relu && acc < 0.0) {
        acc = 0.0;
        for (int t = 0; t < K; ++t) dacc[t] = 0.0;
      }
      if (layer.batch_norm) {
        const double scale = layer.bn_gamma[j] / std::sqrt(layer.bn_var[j] + kBnEpsilon);
        acc = scale * (acc - layer.bn_mean[j]) + layer.bn_beta[j];
        for (int t = 0; t < K; ++t) dacc[t] *= scale;
      }
      nxt[j] = acc;
      for (int t = 0; t < K; ++t) dnxt[static_cast<std::size_t>(j) * K + t] = dacc[t];
    }
    cur.swap(nxt);
    dcur.swap(dnxt);
  }
  MlpJvpResult<K> res;
  res.value = cur[0];
  for (int t = 0; t < K; ++t) res.deriv[t] = dcur[t];
  return res;
}

}  // namespace

MlpJvpResult<1> mlp_forward_jvp1(const MlpWeights& w, std::span<const double> x,
                                 std::span<const double> dx) {
  return forward_jvp<1>(w, x, [&](int k, int) { return dx[static_cast<std::size_t>(k)]; });
}

MlpJvpResult<3> mlp_forward_jvp3(const MlpWeights& w, std::span<const double> x,
                                 std::span<const std::array<double, 3>> dx) {
  return forward_jvp<3>(w, x,
                        [&](int k, int t) { return dx[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)]; });
}

MlpArch nett_default_arch() {
  MlpArch a;
  a.hidden = {64, 64, 64, 64};
  a.concat_layers = {3};
  a.batch_norm = true;
  return a;
}

MlpArch mnerf_default_arch() {
  MlpArch a;
  a.hidden = {128, 128, 128, 128, 128, 128};
  a.concat_layers = {2, 4};
  a.batch_norm = true;
  return a;
}

MlpWeights make_mlp(const MlpArch& arch, int encoding_width, std::uint64_t seed) {
  Rng rng(seed);
  MlpWeights w;
  w.encoding_width = encoding_width;
  int prev = encoding_width;
  for (std::size_t h = 0; h < arch.hidden.size(); ++h) {
    MlpLayer layer;
    layer.concat_encoding =
        h > 0 && std::find(arch.concat_layers.begin(), arch.concat_layers.end(),
                           static_cast<int>(h)) != arch.concat_layers.end();
    layer.in = (h == 0 ? encoding_width : prev + (layer.concat_encoding ? encoding_width : 0));
    layer.out = arch.hidden[h];
    layer.relu = true;
    layer.batch_norm = arch.batch_norm;
    layer.w.resize(static_cast<std::size_t>(layer.in) * layer.out);
    const double sd = std::sqrt(2.0 / layer.in);
    for (double& v : layer.w) v = sd * rng.normal();
    layer.b.assign(static_cast<std::size_t>(layer.out), 0.0);
    if (layer.batch_norm) {
      layer.bn_gamma.assign(static_cast<std::size_t>(layer.out), 1.0);
      layer.bn_beta.assign(static_cast<std::size_t>(layer.out), 0.0);
      layer.bn_mean.assign(static_cast<std::size_t>(layer.out), 0.0);
      layer.bn_var.assign(static_cast<std::size_t>(layer.out), 1.0);
    }
    prev = layer.out;
    w.layers.push_back(std::move(layer));
  }
  MlpLayer head;
  head.in = prev;
  head.out = 1;
  head.relu = true;
  head.batch_norm = false;
  head.w.resize(static_cast<std::size_t>(head.in));
  const double sd = std::sqrt(2.0 / head.in);
  for (double& v : head.w) v = sd * rng.normal();
  head.b.assign(1, 0.0);
  w.layers.push_back(std::move(head));
  w.validate();
  return w;
}

std::size_t trainable_count(const MlpWeights& w) {
  std::size_t n = 0;
  for (const MlpLayer& l : w.layers) {
    n += l.w.size() + l.b.size();
    if (l.batch_norm) n += l.bn_gamma.size() + l.bn_beta.size();
  }
  return n;
}

void flatten_trainable(const MlpWeights& w, std::vector<double>& out) {
  out.clear();
  out.reserve(trainable_count(w));
  for (const MlpLayer& l : w.layers) {
    out.insert(out.end(), l.w.begin(), l.w.end());
    out.insert(out.end(), l.b.begin(), l.b.end());
    if (l.batch_norm) {
      out.insert(out.end(), l.bn_gamma.begin(), l.bn_gamma.end());
      out.insert(out.end(), l.bn_beta.begin(), l.bn_beta.end());
    }
  }
}

void unflatten_trainable(std::span<const double> flat, MlpWeights& w) {
  std::size_t pos = 0;
  auto take = [&](std::vector<double>& dst) {
    std::copy(flat.begin() + pos, flat.begin() + pos + dst.size(), dst.begin());
    pos += dst.size();
  };
  for (MlpLayer& l : w.layers) {
    take(l.w);
    take(l.b);
    if (l.batch_norm) {
      take(l.bn_gamma);
      take(l.bn_beta);
    }
  }
  if (pos != flat.size()) throw std::invalid_argument("unflatten_trainable: size mismatch");
}

// ---------------------------------------------------------------------------

void MlpBatch::forward(MlpWeights& w, std::span<const double> inputs, int n, MlpMode mode) {
  w.validate();
  if (inputs.size() != static_cast<std::size_t>(n) * w.encoding_width)
    throw std::invalid_argument("MlpBatch: input size mismatch");
  n_ = n;
  mode_ = mode;
  enc_.assign(inputs.begin(), inputs.end());
  cache_.resize(w.layers.size());

  const int ew = w.encoding_width;
  for (std::size_t l = 0; l < w.layers.size(); ++l) {
    MlpLayer& layer = w.layers[l];
    LayerCache& c = cache_[l];
    // Assemble input rows for this layer.
    const int in = layer.in;
    scratch_in_.assign(static_cast<std::size_t>(n) * in, 0.0);
    for (int i = 0; i < n; ++i) {
      double* row = scratch_in_.data() + static_cast<std::size_t>(i) * in;
      if (l == 0) {
        const double* e = enc_.data() + static_cast<std::size_t>(i) * ew;
        std::copy(e, e + ew, row);
      } else {
        const int pw = w.layers[l - 1].out;
        const double* prev = cache_[l - 1].y.data() + static_cast<std::size_t>(i) * pw;
        std::copy(prev, prev + pw, row);
        if (layer.concat_encoding) {
          const double* e = enc_.data() + static_cast<std::size_t>(i) * ew;
          std::copy(e, e + ew, row + pw);
        }
      }
    }

    c.z.assign(static_cast<std::size_t>(n) * layer.out, 0.0);
    for (int i = 0; i < n; ++i) {
      const double* row = scratch_in_.data() + static_cast<std::size_t>(i) * in;
      double* zr = c.z.data() + static_cast<std::size_t>(i) * layer.out;
      for (int j = 0; j < layer.out; ++j) {
        const double* wr = layer.w.data() + static_cast<std::size_t>(j) * in;
        double acc = layer.b[j];
        for (int k = 0; k < in; ++k) acc += wr[k] * row[k];
        zr[j] = acc;
      }
    }

    c.y.assign(static_cast<std::size_t>(n) * layer.out, 0.0);
    if (layer.batch_norm) {
      c.mu.assign(static_cast<std::size_t>(layer.out), 0.0);
      c.var.assign(static_cast<std::size_t>(layer.out), 0.0);
      if (mode == MlpMode::kTrain) {
        for (int i = 0; i < n; ++i) {
          const double* zr = c.z.data() + static_cast<std::size_t>(i) * layer.out;
          for (int j = 0; j < layer.out; ++j) {
            const double a = layer.relu ? std::max(zr[j], 0.0) : zr[j];
            c.mu[j] += a;
            c.var[j] += a * a;
          }
        }
        for (int j = 0; j < layer.out; ++j) {
          c.mu[j] /= n;
          c.var[j] = std::max(c.var[j] / n - c.mu[j] * c.mu[j], 0.0);
          layer.bn_mean[j] = (1.0 - kBnMomentum) * layer.bn_mean[j] + kBnMomentum * c.mu[j];
          layer.bn_var[j] = (1.0 - kBnMomentum) * layer.bn_var[j] + kBnMomentum * c.var[j];
        }
      } else {
        for (int j = 0; j < layer.out; ++j) {
          c.mu[j] = layer.bn_mean[j];
          c.var[j] = layer.bn_var[j];
        }
      }
      for (int i = 0; i < n; ++i) {
        const double* zr = c.z.data() + static_cast<std::size_t>(i) * layer.out;
        double* yr = c.y.data() + static_cast<std::size_t>(i) * layer.out;
        for (int j = 0; j < layer.out; ++j) {
          const double a = layer.relu ? std::max(zr[j], 0.0) : zr[j];
          yr[j] = layer.bn_gamma[j] * (a - c.mu[j]) / std::sqrt(c.var[j] + kBnEpsilon) +
                  layer.bn_beta[j];
        }
      }
    } else {
      for (std::size_t i = 0; i < c.z.size(); ++i)
        c.y[i] = layer.relu ? std::max(c.z[i], 0.0) : c.z[i];
    }
  }

  const LayerCache& last = cache_.back();
  outputs_.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) outputs_[static_cast<std::size_t>(i)] = last.y[static_cast<std::size_t>(i)];
}

void MlpBatch::backward(const MlpWeights& w, std::span<const double> dout, MlpGrads& grads) {
  if (dout.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("MlpBatch: dout size mismatch");
  if (grads.flat.size() != trainable_count(w)) grads.resize_like(w);

  const int ew = w.encoding_width;
  // Per-layer offsets into the flat gradient vector.
  std::vector<std::size_t> offset(w.layers.size());
  {
    std::size_t pos = 0;
    for (std::size_t l = 0; l < w.layers.size(); ++l) {
      offset[l] = pos;
      pos += w.layers[l].w.size() + w.layers[l].b.size();
      if (w.layers[l].batch_norm)
        pos += w.layers[l].bn_gamma.size() + w.layers[l].bn_beta.size();
    }
  }

  std::vector<double> dy(dout.begin(), dout.end());  // gradient w.r.t. layer output
  std::vector<double> dprev;
  std::vector<double> xhat, mean_dy, mean_dyxhat;
  for (int li = static_cast<int>(w.layers.size()) - 1; li >= 0; --li) {
    const MlpLayer& layer = w.layers[static_cast<std::size_t>(li)];
    const LayerCache& c = cache_[static_cast<std::size_t>(li)];
    const int out = layer.out, in = layer.in;
    double* gw = grads.flat.data() + offset[static_cast<std::size_t>(li)];
    double* gb = gw + layer.w.size();
    double* ggamma = layer.batch_norm ? gb + layer.b.size() : nullptr;
    double* gbeta = layer.batch_norm ? ggamma + layer.bn_gamma.size() : nullptr;

    // Through batch norm (if any) to d/d(relu output), then relu mask to dz.
    std::vector<double>& dz = dy;  // reuse buffer; overwritten in place
    if (layer.batch_norm) {
      xhat.assign(static_cast<std::size_t>(n_) * out, 0.0);
      mean_dy.assign(static_cast<std::size_t>(out), 0.0);
      mean_dyxhat.assign(static_cast<std::size_t>(out), 0.0);
      for (int i = 0; i < n_; ++i) {
        const double* zr = c.z.data() + static_cast<std::size_t>(i) * out;
        const double* dyr = dy.data() + static_cast<std::size_t>(i) * out;
        double* xr = xhat.data() + static_cast<std::size_t>(i) * out;
        for (int j = 0; j < out; ++j) {
          const double a = layer.relu ? std::max(zr[j], 0.0) : zr[j];
          xr[j] = (a - c.mu[j]) / std::sqrt(c.var[j] + kBnEpsilon);
          mean_dy[j] += dyr[j];
          mean_dyxhat[j] += dyr[j] * xr[j];
        }
      }
      for (int j = 0; j < out; ++j) {
        ggamma[j] += mean_dyxhat[j];
        gbeta[j] += mean_dy[j];
        mean_dy[j] /= n_;
        mean_dyxhat[j] /= n_;
      }
      for (int i = 0; i < n_; ++i) {
        double* dyr = dy.data() + static_cast<std::size_t>(i) * out;
        const double* xr = xhat.data() + static_cast<std::size_t>(i) * out;
        for (int j = 0; j < out; ++j) {
          const double scale = layer.bn_gamma[j] / std::sqrt(c.var[j] + kBnEpsilon);
          double g = dyr[j];
          if (mode_ == MlpMode::kTrain) g = g - mean_dy[j] - xr[j] * mean_dyxhat[j];
          dyr[j] = scale * g;
        }
      }
    }
    if (layer.relu) {
      for (int i = 0; i < n_; ++i) {
        const double* zr = c.z.data() + static_cast<std::size_t>(i) * out;
        double* dr = dz.data() + static_cast<std::size_t>(i) * out;
        for (int j = 0; j < out; ++j)
          if (zr[j] < 0.0) dr[j] = 0.0;
      }
    }

    // Reassemble this layer's input rows for dW, and push gradient to the
    // previous layer's output.
    const int pw = li > 0 ? w.layers[static_cast<std::size_t>(li) - 1].out : 0;
    dprev.assign(static_cast<std::size_t>(n_) * (li > 0 ? pw : 1), 0.0);
    for (int i = 0; i < n_; ++i) {
      const double* dzr = dz.data() + static_cast<std::size_t>(i) * out;
      // input row
      scratch_in_.assign(static_cast<std::size_t>(in), 0.0);
      if (li == 0) {
        const double* e = enc_.data() + static_cast<std::size_t>(i) * ew;
        std::copy(e, e + ew, scratch_in_.begin());
      } else {
        const double* prev = cache_[static_cast<std::size_t>(li) - 1].y.data() +
                             static_cast<std::size_t>(i) * pw;
        std::copy(prev, prev + pw, scratch_in_.begin());
        if (layer.concat_encoding) {
          const double* e = enc_.data() + static_cast<std::size_t>(i) * ew;
          std::copy(e, e + ew, scratch_in_.begin() + pw);
        }
      }
      for (int j = 0; j < out; ++j) {
        const double g = dzr[j];
        if (g == 0.0) continue;
        double* gwr = gw + static_cast<std::size_t>(j) * in;
        for (int k = 0; k < in; ++k) gwr[k] += g * scratch_in_[static_cast<std::size_t>(k)];
        gb[j] += g;
        if (li > 0) {
          const double* wr = layer.w.data() + static_cast<std::size_t>(j) * in;
          double* dp = dprev.data() + static_cast<std::size_t>(i) * pw;
          for (int k = 0; k < pw; ++k) dp[k] += g * wr[k];  // concat part discarded
        }
      }
    }
    if (li > 0) dy = dprev;
  }
}

}  // namespace drr
