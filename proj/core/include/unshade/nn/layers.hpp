#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "unshade/errors.hpp"
#include "unshade/nn/gemm.hpp"
#include "unshade/rng.hpp"
#include "unshade/tensor.hpp"

namespace unshade::nn {

// Per-pass activation cache. Each network forward owns one cache tree, so a
// single set of parameters can serve several concurrent forward passes per
// training step (cycle, identity and adversarial branches) and be
// back-propagated through each of them independently.
template <typename T>
struct Cache {
  std::vector<Tensor<T>> t;
  std::vector<Cache<T>> sub;
};

template <typename T>
struct ParamRef {
  std::string name;
  Tensor<T>* value;
  Tensor<T>* grad;
};

template <typename T>
using ParamList = std::vector<ParamRef<T>>;

template <typename T>
class Layer {
public:
  virtual ~Layer() = default;

  // cache may be null for pure inference.
  virtual Tensor<T> forward(const Tensor<T>& x, Cache<T>* cache) const = 0;

  // Maps the gradient wrt the output to the gradient wrt the input, using
  // activations stashed by the matching forward. Parameter gradients are
  // accumulated (+=) only when accum_param_grads is set; the input gradient
  // is computed only when need_input_grad is set (an empty tensor is
  // returned otherwise). backward never mutates the cache, so one forward
  // pass can serve several backward passes.
  virtual Tensor<T> backward(const Tensor<T>& gy, const Cache<T>& cache,
                             bool accum_param_grads, bool need_input_grad) = 0;

  virtual void collect_params(const std::string& prefix, ParamList<T>& out) {
    (void)prefix;
    (void)out;
  }
};

// ---------------------------------------------------------------------------
// im2col / col2im

// col has shape [C*k*k, outH*outW]; row (c*k + ki)*k + kj holds the input
// value at (c, oh*stride + ki - pad, ow*stride + kj - pad), zero outside.
template <typename T>
void im2col(const T* src, int C, int H, int W, int k, int stride, int pad,
            int outH, int outW, T* col) {
  const std::int64_t N = std::int64_t(outH) * outW;
  for (int c = 0; c < C; ++c) {
    const T* plane = src + std::int64_t(c) * H * W;
    for (int ki = 0; ki < k; ++ki) {
      for (int kj = 0; kj < k; ++kj) {
        T* dst = col + (std::int64_t(c) * k * k + ki * k + kj) * N;
        for (int oh = 0; oh < outH; ++oh) {
          int ih = oh * stride + ki - pad;
          T* drow = dst + std::int64_t(oh) * outW;
          if (ih < 0 || ih >= H) {
            for (int ow = 0; ow < outW; ++ow) drow[ow] = T(0);
            continue;
          }
          const T* srow = plane + std::int64_t(ih) * W;
          const int iw0 = kj - pad;
          for (int ow = 0; ow < outW; ++ow) {
            int iw = ow * stride + iw0;
            drow[ow] = (iw >= 0 && iw < W) ? srow[iw] : T(0);
          }
        }
      }
    }
  }
}

// Adjoint of im2col: scatter-adds col entries back onto a [C,H,W] grid.
// dst must be pre-zeroed by the caller (or hold values to accumulate onto).
template <typename T>
void col2im(const T* col, int C, int H, int W, int k, int stride, int pad,
            int outH, int outW, T* dst) {
  const std::int64_t N = std::int64_t(outH) * outW;
  for (int c = 0; c < C; ++c) {
    T* plane = dst + std::int64_t(c) * H * W;
    for (int ki = 0; ki < k; ++ki) {
      for (int kj = 0; kj < k; ++kj) {
        const T* src = col + (std::int64_t(c) * k * k + ki * k + kj) * N;
        for (int oh = 0; oh < outH; ++oh) {
          int ih = oh * stride + ki - pad;
          if (ih < 0 || ih >= H) continue;
          const T* srow = src + std::int64_t(oh) * outW;
          T* drow = plane + std::int64_t(ih) * W;
          const int iw0 = kj - pad;
          for (int ow = 0; ow < outW; ++ow) {
            int iw = ow * stride + iw0;
            if (iw >= 0 && iw < W) drow[iw] += srow[ow];
          }
        }
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Reflection padding (no edge repeat, mirror about the border pixel).

inline int reflect_index(int i, int n) {
  if (i < 0) return -i;
  if (i >= n) return 2 * n - 2 - i;
  return i;
}

template <typename T>
Tensor<T> reflect_pad(const Tensor<T>& x, int top, int bottom, int left,
                      int right) {
  const int C = static_cast<int>(x.dim(0));
  const int H = static_cast<int>(x.dim(1));
  const int W = static_cast<int>(x.dim(2));
  check(top < H && bottom < H && left < W && right < W,
        "nn: reflection pad wider than the input");
  Tensor<T> out({C, H + top + bottom, W + left + right});
  for (int c = 0; c < C; ++c)
    for (int y = 0; y < H + top + bottom; ++y) {
      int sy = reflect_index(y - top, H);
      for (int x2 = 0; x2 < W + left + right; ++x2)
        out.at(c, y, x2) = x.at(c, sy, reflect_index(x2 - left, W));
    }
  return out;
}

// Adjoint of reflect_pad: folds border gradients onto their mirror source.
template <typename T>
Tensor<T> reflect_pad_backward(const Tensor<T>& gpad, int top, int bottom,
                               int left, int right) {
  const int C = static_cast<int>(gpad.dim(0));
  const int Hp = static_cast<int>(gpad.dim(1));
  const int Wp = static_cast<int>(gpad.dim(2));
  const int H = Hp - top - bottom;
  const int W = Wp - left - right;
  Tensor<T> gx({C, H, W});
  for (int c = 0; c < C; ++c)
    for (int y = 0; y < Hp; ++y) {
      int sy = reflect_index(y - top, H);
      for (int x2 = 0; x2 < Wp; ++x2)
        gx.at(c, sy, reflect_index(x2 - left, W)) += gpad.at(c, y, x2);
    }
  return gx;
}

// ---------------------------------------------------------------------------
// Convolution

enum class PadMode { zero, reflect };

template <typename T>
class Conv2d : public Layer<T> {
public:
  Conv2d(int in_ch, int out_ch, int k, int stride, int pad, PadMode mode)
      : in_ch_(in_ch), out_ch_(out_ch), k_(k), stride_(stride), pad_(pad),
        mode_(mode), weight_({out_ch, in_ch * k * k}), bias_({out_ch}),
        wgrad_({out_ch, in_ch * k * k}), bgrad_({out_ch}) {}

  Tensor<T> forward(const Tensor<T>& x, Cache<T>* cache) const override {
    check(x.ndim() == 3 && x.dim(0) == in_ch_,
          "nn: conv input channel mismatch, got " + x.shape_string());
    // With reflect padding the padded tensor is materialized and im2col runs
    // pad-free on it; with zero padding im2col zero-fills directly.
    Tensor<T> padded;
    const Tensor<T>* src = &x;
    int eff_pad = pad_;
    if (mode_ == PadMode::reflect && pad_ > 0) {
      padded = reflect_pad(x, pad_, pad_, pad_, pad_);
      src = &padded;
      eff_pad = 0;
    }
    const int H = static_cast<int>(src->dim(1));
    const int W = static_cast<int>(src->dim(2));
    const int outH = (H + 2 * eff_pad - k_) / stride_ + 1;
    const int outW = (W + 2 * eff_pad - k_) / stride_ + 1;
    check(H + 2 * eff_pad >= k_ && W + 2 * eff_pad >= k_ && outH > 0 &&
              outW > 0,
          "nn: conv input too small, got " + x.shape_string());

    Tensor<T> col({std::int64_t(in_ch_) * k_ * k_, std::int64_t(outH) * outW});
    im2col(src->data(), in_ch_, H, W, k_, stride_, eff_pad, outH, outW,
           col.data());

    Tensor<T> y({out_ch_, outH, outW});
    ConstMatMap<T> w(weight_.data(), out_ch_, std::int64_t(in_ch_) * k_ * k_);
    ConstMatMap<T> cm(col.data(), col.dim(0), col.dim(1));
    MatMap<T> ym(y.data(), out_ch_, col.dim(1));
    ym.noalias() = w * cm;
    for (int oc = 0; oc < out_ch_; ++oc) {
      T b = bias_[oc];
      T* row = y.data() + std::int64_t(oc) * outH * outW;
      for (std::int64_t i = 0; i < std::int64_t(outH) * outW; ++i) row[i] += b;
    }
    if (cache) {
      cache->t.clear();
      cache->t.push_back(mode_ == PadMode::reflect && pad_ > 0 ? std::move(padded)
                                                               : x);
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy, const Cache<T>& cache,
                     bool accum_param_grads, bool need_input_grad) override {
    const Tensor<T>& src = cache.t[0];  // padded input (reflect) or input
    const int eff_pad = (mode_ == PadMode::reflect && pad_ > 0) ? 0 : pad_;
    const int H = static_cast<int>(src.dim(1));
    const int W = static_cast<int>(src.dim(2));
    const int outH = static_cast<int>(gy.dim(1));
    const int outW = static_cast<int>(gy.dim(2));
    const std::int64_t N = std::int64_t(outH) * outW;
    const std::int64_t K = std::int64_t(in_ch_) * k_ * k_;

    ConstMatMap<T> gym(gy.data(), out_ch_, N);
    if (accum_param_grads) {
      for (int oc = 0; oc < out_ch_; ++oc) {
        const T* row = gy.data() + std::int64_t(oc) * N;
        T s = T(0);
        for (std::int64_t i = 0; i < N; ++i) s += row[i];
        bgrad_[oc] += s;
      }
      // im2col is recomputed rather than cached: activations dominate memory.
      Tensor<T> col({K, N});
      im2col(src.data(), in_ch_, H, W, k_, stride_, eff_pad, outH, outW,
             col.data());
      ConstMatMap<T> cm(col.data(), K, N);
      MatMap<T> wg(wgrad_.data(), out_ch_, K);
      wg.noalias() += gym * cm.transpose();
    }
    if (!need_input_grad) return {};

    Tensor<T> dcol({K, N});
    ConstMatMap<T> w(weight_.data(), out_ch_, K);
    MatMap<T> dcm(dcol.data(), K, N);
    dcm.noalias() = w.transpose() * gym;

    Tensor<T> dsrc({src.dim(0), src.dim(1), src.dim(2)});
    col2im(dcol.data(), in_ch_, H, W, k_, stride_, eff_pad, outH, outW,
           dsrc.data());
    if (mode_ == PadMode::reflect && pad_ > 0)
      return reflect_pad_backward(dsrc, pad_, pad_, pad_, pad_);
    return dsrc;
  }

  void collect_params(const std::string& prefix, ParamList<T>& out) override {
    out.push_back({prefix + ".weight", &weight_, &wgrad_});
    out.push_back({prefix + ".bias", &bias_, &bgrad_});
  }

private:
  int in_ch_, out_ch_, k_, stride_, pad_;
  PadMode mode_;
  Tensor<T> weight_, bias_, wgrad_, bgrad_;
};

// ---------------------------------------------------------------------------
// Transposed convolution, fixed 2x upsampler: k=3, stride=2, pad=1,
// output_padding=1, so [C,H,W] -> [outC,2H,2W]. Implemented as the exact
// adjoint of the corresponding downsampling convolution: forward scatters
// W^T * X through col2im, backward-data gathers with im2col.
template <typename T>
class ConvTranspose2d : public Layer<T> {
public:
  ConvTranspose2d(int in_ch, int out_ch)
      : in_ch_(in_ch), out_ch_(out_ch), weight_({in_ch, out_ch * k_ * k_}),
        bias_({out_ch}), wgrad_({in_ch, out_ch * k_ * k_}), bgrad_({out_ch}) {}

  Tensor<T> forward(const Tensor<T>& x, Cache<T>* cache) const override {
    check(x.ndim() == 3 && x.dim(0) == in_ch_,
          "nn: deconv input channel mismatch, got " + x.shape_string());
    const int H = static_cast<int>(x.dim(1));
    const int W = static_cast<int>(x.dim(2));
    const int outH = 2 * H, outW = 2 * W;
    const std::int64_t N = std::int64_t(H) * W;
    const std::int64_t K = std::int64_t(out_ch_) * k_ * k_;

    Tensor<T> colg({K, N});
    ConstMatMap<T> w(weight_.data(), in_ch_, K);
    ConstMatMap<T> xm(x.data(), in_ch_, N);
    MatMap<T> cg(colg.data(), K, N);
    cg.noalias() = w.transpose() * xm;

    Tensor<T> y({out_ch_, outH, outW});
    for (int oc = 0; oc < out_ch_; ++oc) {
      T b = bias_[oc];
      T* row = y.data() + std::int64_t(oc) * outH * outW;
      for (std::int64_t i = 0; i < std::int64_t(outH) * outW; ++i) row[i] = b;
    }
    col2im(colg.data(), out_ch_, outH, outW, k_, stride_, pad_, H, W,
           y.data());
    if (cache) {
      cache->t.clear();
      cache->t.push_back(x);
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy, const Cache<T>& cache,
                     bool accum_param_grads, bool need_input_grad) override {
    const Tensor<T>& x = cache.t[0];
    const int H = static_cast<int>(x.dim(1));
    const int W = static_cast<int>(x.dim(2));
    const int outH = 2 * H, outW = 2 * W;
    const std::int64_t N = std::int64_t(H) * W;
    const std::int64_t K = std::int64_t(out_ch_) * k_ * k_;

    Tensor<T> dcolg({K, N});
    im2col(gy.data(), out_ch_, outH, outW, k_, stride_, pad_, H, W,
           dcolg.data());
    ConstMatMap<T> dcg(dcolg.data(), K, N);

    if (accum_param_grads) {
      for (int oc = 0; oc < out_ch_; ++oc) {
        const T* row = gy.data() + std::int64_t(oc) * outH * outW;
        T s = T(0);
        for (std::int64_t i = 0; i < std::int64_t(outH) * outW; ++i)
          s += row[i];
        bgrad_[oc] += s;
      }
      ConstMatMap<T> xm(x.data(), in_ch_, N);
      MatMap<T> wg(wgrad_.data(), in_ch_, K);
      wg.noalias() += xm * dcg.transpose();
    }
    if (!need_input_grad) return {};

    Tensor<T> dx({in_ch_, H, W});
    ConstMatMap<T> w(weight_.data(), in_ch_, K);
    MatMap<T> dxm(dx.data(), in_ch_, N);
    dxm.noalias() = w * dcg;
    return dx;
  }

  void collect_params(const std::string& prefix, ParamList<T>& out) override {
    out.push_back({prefix + ".weight", &weight_, &wgrad_});
    out.push_back({prefix + ".bias", &bias_, &bgrad_});
  }

private:
  static constexpr int k_ = 3, stride_ = 2, pad_ = 1;
  int in_ch_, out_ch_;
  Tensor<T> weight_, bias_, wgrad_, bgrad_;
};

// ---------------------------------------------------------------------------
// Instance normalization, no learned affine. Per channel over H*W.
template <typename T>
class InstanceNorm2d : public Layer<T> {
public:
  explicit InstanceNorm2d(int ch) : ch_(ch) {}

  static constexpr T eps = T(1e-5);

  Tensor<T> forward(const Tensor<T>& x, Cache<T>* cache) const override {
    check(x.ndim() == 3 && x.dim(0) == ch_,
          "nn: instance norm channel mismatch, got " + x.shape_string());
    const std::int64_t plane = x.dim(1) * x.dim(2);
    Tensor<T> y(x.shape());
    Tensor<T> inv_std({ch_});
    for (int c = 0; c < ch_; ++c) {
      const T* src = x.data() + c * plane;
      T* dst = y.data() + c * plane;
      T mean = T(0);
      for (std::int64_t i = 0; i < plane; ++i) mean += src[i];
      mean /= T(plane);
      T var = T(0);
      for (std::int64_t i = 0; i < plane; ++i) {
        T d = src[i] - mean;
        var += d * d;
      }
      var /= T(plane);
      T is = T(1) / std::sqrt(var + eps);
      inv_std[c] = is;
      for (std::int64_t i = 0; i < plane; ++i) dst[i] = (src[i] - mean) * is;
    }
    if (cache) {
      cache->t.clear();
      cache->t.push_back(y);  // normalized output doubles as x-hat
      cache->t.push_back(std::move(inv_std));
    }
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy, const Cache<T>& cache,
                     bool /*accum_param_grads*/,
                     bool need_input_grad) override {
    if (!need_input_grad) return {};
    const Tensor<T>& xhat = cache.t[0];
    const Tensor<T>& inv_std = cache.t[1];
    const std::int64_t plane = gy.dim(1) * gy.dim(2);
    Tensor<T> dx(gy.shape());
    for (int c = 0; c < ch_; ++c) {
      const T* g = gy.data() + c * plane;
      const T* xh = xhat.data() + c * plane;
      T* d = dx.data() + c * plane;
      T m1 = T(0), m2 = T(0);
      for (std::int64_t i = 0; i < plane; ++i) {
        m1 += g[i];
        m2 += g[i] * xh[i];
      }
      m1 /= T(plane);
      m2 /= T(plane);
      T is = inv_std[c];
      for (std::int64_t i = 0; i < plane; ++i)
        d[i] = is * (g[i] - m1 - xh[i] * m2);
    }
    return dx;
  }

private:
  int ch_;
};

// ---------------------------------------------------------------------------
// Activations

template <typename T>
class ReLU : public Layer<T> {
public:
  Tensor<T> forward(const Tensor<T>& x, Cache<T>* cache) const override {
    Tensor<T> y(x.shape());
    for (std::int64_t i = 0; i < x.size(); ++i)
      y[i] = x[i] > T(0) ? x[i] : T(0);
    if (cache) {
      cache->t.clear();
      cache->t.push_back(x);
    }
    return y;
  }
  Tensor<T> backward(const Tensor<T>& gy, const Cache<T>& cache,
                     bool, bool need_input_grad) override {
    if (!need_input_grad) return {};
    const Tensor<T>& x = cache.t[0];
    Tensor<T> dx(gy.shape());
    for (std::int64_t i = 0; i < gy.size(); ++i)
      dx[i] = x[i] > T(0) ? gy[i] : T(0);
    return dx;
  }
};

template <typename T>
class LeakyReLU : public Layer<T> {
public:
  explicit LeakyReLU(T slope) : slope_(slope) {}

  Tensor<T> forward(const Tensor<T>& x, Cache<T>* cache) const override {
    Tensor<T> y(x.shape());
    for (std::int64_t i = 0; i < x.size(); ++i)
      y[i] = x[i] > T(0) ? x[i] : slope_ * x[i];
    if (cache) {
      cache->t.clear();
      cache->t.push_back(x);
    }
    return y;
  }
  Tensor<T> backward(const Tensor<T>& gy, const Cache<T>& cache,
                     bool, bool need_input_grad) override {
    if (!need_input_grad) return {};
    const Tensor<T>& x = cache.t[0];
    Tensor<T> dx(gy.shape());
    for (std::int64_t i = 0; i < gy.size(); ++i)
      dx[i] = x[i] > T(0) ? gy[i] : slope_ * gy[i];
    return dx;
  }

private:
  T slope_;
};

template <typename T>
class Tanh : public Layer<T> {
public:
  Tensor<T> forward(const Tensor<T>& x, Cache<T>* cache) const override {
    Tensor<T> y(x.shape());
    for (std::int64_t i = 0; i < x.size(); ++i) y[i] = std::tanh(x[i]);
    if (cache) {
      cache->t.clear();
      cache->t.push_back(y);
    }
    return y;
  }
  Tensor<T> backward(const Tensor<T>& gy, const Cache<T>& cache,
                     bool, bool need_input_grad) override {
    if (!need_input_grad) return {};
    const Tensor<T>& y = cache.t[0];
    Tensor<T> dx(gy.shape());
    for (std::int64_t i = 0; i < gy.size(); ++i)
      dx[i] = gy[i] * (T(1) - y[i] * y[i]);
    return dx;
  }
};

// ---------------------------------------------------------------------------
// Containers

template <typename T>
class Sequential {
public:
  template <typename L, typename... Args>
  L& emplace(Args&&... args) {
    auto layer = std::make_unique<L>(std::forward<Args>(args)...);
    L& ref = *layer;
    layers_.push_back(std::move(layer));
    return ref;
  }

  Tensor<T> forward(const Tensor<T>& x, Cache<T>* cache) const {
    if (cache) cache->sub.resize(layers_.size());
    Tensor<T> cur = x;
    for (std::size_t i = 0; i < layers_.size(); ++i)
      cur = layers_[i]->forward(cur, cache ? &cache->sub[i] : nullptr);
    return cur;
  }

  Tensor<T> backward(const Tensor<T>& gy, const Cache<T>& cache,
                     bool accum_param_grads, bool need_input_grad) {
    check(cache.sub.size() == layers_.size(),
          "nn: cache does not match network");
    Tensor<T> cur = gy;
    for (std::size_t i = layers_.size(); i-- > 0;) {
      bool need = need_input_grad || i > 0;
      cur = layers_[i]->backward(cur, cache.sub[i], accum_param_grads, need);
    }
    return cur;
  }

  void collect_params(const std::string& prefix, ParamList<T>& out) {
    for (std::size_t i = 0; i < layers_.size(); ++i)
      layers_[i]->collect_params(prefix + "." + std::to_string(i), out);
  }

  std::size_t size() const { return layers_.size(); }

private:
  std::vector<std::unique_ptr<Layer<T>>> layers_;
};

// conv-norm-relu-conv-norm with a skip connection and no activation after
// the sum.
template <typename T>
class ResidualBlock : public Layer<T> {
public:
  explicit ResidualBlock(int ch) {
    inner_.template emplace<Conv2d<T>>(ch, ch, 3, 1, 1, PadMode::reflect);
    inner_.template emplace<InstanceNorm2d<T>>(ch);
    inner_.template emplace<ReLU<T>>();
    inner_.template emplace<Conv2d<T>>(ch, ch, 3, 1, 1, PadMode::reflect);
    inner_.template emplace<InstanceNorm2d<T>>(ch);
  }

  Tensor<T> forward(const Tensor<T>& x, Cache<T>* cache) const override {
    Cache<T>* ic = nullptr;
    if (cache) {
      cache->sub.resize(1);
      ic = &cache->sub[0];
    }
    Tensor<T> y = inner_.forward(x, ic);
    for (std::int64_t i = 0; i < y.size(); ++i) y[i] += x[i];
    return y;
  }

  Tensor<T> backward(const Tensor<T>& gy, const Cache<T>& cache,
                     bool accum_param_grads, bool need_input_grad) override {
    Tensor<T> dx =
        inner_.backward(gy, cache.sub[0], accum_param_grads, need_input_grad);
    if (!need_input_grad) return {};
    for (std::int64_t i = 0; i < dx.size(); ++i) dx[i] += gy[i];
    return dx;
  }

  void collect_params(const std::string& prefix, ParamList<T>& out) override {
    inner_.collect_params(prefix, out);
  }

private:
  Sequential<T> inner_;
};

// ---------------------------------------------------------------------------
// Parameter utilities

template <typename T>
void zero_grads(const ParamList<T>& params) {
  for (const auto& p : params) p.grad->zero();
}

// Weights ~ N(0, 0.02), biases zero; draw order follows registration order.
// Draws happen in double so float and double networks see the same values.
template <typename T>
void init_params(const ParamList<T>& params, Rng& rng) {
  for (const auto& p : params) {
    if (p.name.size() >= 5 && p.name.rfind(".bias") == p.name.size() - 5) {
      p.value->zero();
    } else {
      for (std::int64_t i = 0; i < p.value->size(); ++i)
        (*p.value)[i] = static_cast<T>(rng.normal(0.0, 0.02));
    }
  }
}

}  // namespace unshade::nn
