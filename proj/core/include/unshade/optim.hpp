#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "unshade/errors.hpp"
#include "unshade/nn/layers.hpp"

namespace unshade {

// Adam with bias correction; epsilon is added outside the square root.
// Moment buffers are created lazily to match the parameter list layout,
// which must stay stable across steps (enforced by size checks).
template <class T>
class Adam {
 public:
  Adam(double beta1, double beta2, double eps = 1e-8)
      : beta1_(beta1), beta2_(beta2), eps_(eps) {
    check(beta1 >= 0 && beta1 < 1 && beta2 >= 0 && beta2 < 1,
          "Adam betas must lie in [0,1)");
  }

  void step(const nn::ParamList<T>& params, double lr) {
    if (m_.empty()) {
      m_.resize(params.size());
      v_.resize(params.size());
      for (std::size_t k = 0; k < params.size(); ++k) {
        m_[k].assign(static_cast<std::size_t>(params[k].value->size()), T(0));
        v_[k].assign(static_cast<std::size_t>(params[k].value->size()), T(0));
      }
    }
    check(m_.size() == params.size(), "Adam state/parameter list mismatch");
    ++t_;
    const T b1 = static_cast<T>(beta1_), b2 = static_cast<T>(beta2_);
    const T c1 = T(1) - static_cast<T>(std::pow(beta1_, t_));
    const T c2 = T(1) - static_cast<T>(std::pow(beta2_, t_));
    const T a = static_cast<T>(lr);
    const T e = static_cast<T>(eps_);
    for (std::size_t k = 0; k < params.size(); ++k) {
      Tensor<T>& p = *params[k].value;
      const Tensor<T>& g = *params[k].grad;
      check(static_cast<std::size_t>(p.size()) == m_[k].size(),
            "Adam state size mismatch for " + params[k].name);
      T* m = m_[k].data();
      T* v = v_[k].data();
      for (std::int64_t i = 0; i < p.size(); ++i) {
        m[i] = b1 * m[i] + (T(1) - b1) * g[i];
        v[i] = b2 * v[i] + (T(1) - b2) * g[i] * g[i];
        T mhat = m[i] / c1;
        T vhat = v[i] / c2;
        p[i] -= a * mhat / (std::sqrt(vhat) + e);
      }
    }
  }

  std::int64_t steps() const { return t_; }
  double beta1() const { return beta1_; }
  double beta2() const { return beta2_; }
  double eps() const { return eps_; }

  // Serialization access: moments in parameter-list order.
  const std::vector<std::vector<T>>& first_moments() const { return m_; }
  const std::vector<std::vector<T>>& second_moments() const { return v_; }
  void restore(std::int64_t t, std::vector<std::vector<T>> m,
               std::vector<std::vector<T>> v) {
    check(m.size() == v.size(), "Adam restore: moment list size mismatch");
    t_ = t;
    m_ = std::move(m);
    v_ = std::move(v);
  }

 private:
  double beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
  std::vector<std::vector<T>> m_, v_;
};

// Piecewise-linear schedule: constant base rate for warm epochs, then linear
// decay to zero over decay epochs, zero afterwards (training complete).
inline double lr_at(int epoch, double base_lr, int warm_epochs,
                    int decay_epochs) {
  check(epoch >= 0, "negative epoch");
  if (epoch < warm_epochs) return base_lr;
  int total = warm_epochs + decay_epochs;
  if (epoch >= total) return 0.0;
  return base_lr * static_cast<double>(total - epoch) /
         static_cast<double>(decay_epochs);
}

}  // namespace unshade
