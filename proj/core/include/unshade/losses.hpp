#pragma once

#include <cmath>
#include <string>

#include "unshade/errors.hpp"
#include "unshade/tensor.hpp"

namespace unshade {

// Term weights of the aggregate objective: adversarial, cycle, identity.
struct LossWeights {
  double adversarial = 1.0;
  double cycle = 10.0;
  double identity = 5.0;
};

enum class AdvLossKind { bce, lsgan };

inline AdvLossKind adv_loss_from_string(const std::string& s) {
  if (s == "bce") return AdvLossKind::bce;
  if (s == "lsgan") return AdvLossKind::lsgan;
  throw UsageError("unknown adv_loss '" + s + "' (expected bce or lsgan)");
}

inline const char* to_string(AdvLossKind k) {
  return k == AdvLossKind::bce ? "bce" : "lsgan";
}

namespace detail {
// log(1 + e^x) without overflow.
template <class T>
T softplus(T x) {
  T m = x > T(0) ? x : T(0);
  return m + std::log1p(std::exp(-std::abs(x)));
}

template <class T>
T sigmoid(T x) {
  if (x >= T(0)) return T(1) / (T(1) + std::exp(-x));
  T e = std::exp(x);
  return e / (T(1) + e);
}
}  // namespace detail

// Adversarial loss over a grid of raw patch scores. The discriminator
// minimizes mean[-log sigma(real) - log(1 - sigma(fake))]; the generator
// minimizes the non-saturating mean[-log sigma(fake)]. The lsgan variant
// swaps in least squares: disc = (mean (real-1)^2 + mean fake^2)/2,
// gen = mean (fake-1)^2.
template <class T>
struct AdvTerms {
  T gen = T(0);
  T disc = T(0);
  Tensor<T> dgen_dfake;    // gradient of the generator term wrt fake scores
  Tensor<T> ddisc_dreal;   // gradient of the discriminator term wrt real
  Tensor<T> ddisc_dfake;   // ... and wrt fake scores
};

template <class T>
AdvTerms<T> adv_terms(const Tensor<T>& real_scores,
                      const Tensor<T>& fake_scores, AdvLossKind kind) {
  check(real_scores.size() > 0 && fake_scores.size() > 0,
        "adversarial loss needs non-empty score grids");
  AdvTerms<T> out;
  out.dgen_dfake = Tensor<T>(fake_scores.shape());
  out.ddisc_dreal = Tensor<T>(real_scores.shape());
  out.ddisc_dfake = Tensor<T>(fake_scores.shape());
  const T inv_r = T(1) / static_cast<T>(real_scores.size());
  const T inv_f = T(1) / static_cast<T>(fake_scores.size());

  if (kind == AdvLossKind::bce) {
    for (std::int64_t i = 0; i < real_scores.size(); ++i) {
      T r = real_scores[i];
      check(std::isfinite(static_cast<double>(r)),
            "non-finite discriminator score on real input");
      out.disc += detail::softplus(-r) * inv_r;         // -log sigma(r)
      out.ddisc_dreal[i] = -detail::sigmoid(-r) * inv_r;
    }
    for (std::int64_t i = 0; i < fake_scores.size(); ++i) {
      T f = fake_scores[i];
      check(std::isfinite(static_cast<double>(f)),
            "non-finite discriminator score on fake input");
      out.disc += detail::softplus(f) * inv_f;          // -log(1 - sigma(f))
      out.ddisc_dfake[i] = detail::sigmoid(f) * inv_f;
      out.gen += detail::softplus(-f) * inv_f;          // -log sigma(f)
      out.dgen_dfake[i] = -detail::sigmoid(-f) * inv_f;
    }
  } else {
    for (std::int64_t i = 0; i < real_scores.size(); ++i) {
      T r = real_scores[i];
      check(std::isfinite(static_cast<double>(r)),
            "non-finite discriminator score on real input");
      out.disc += (r - T(1)) * (r - T(1)) * inv_r / T(2);
      out.ddisc_dreal[i] = (r - T(1)) * inv_r;
    }
    for (std::int64_t i = 0; i < fake_scores.size(); ++i) {
      T f = fake_scores[i];
      check(std::isfinite(static_cast<double>(f)),
            "non-finite discriminator score on fake input");
      out.disc += f * f * inv_f / T(2);
      out.ddisc_dfake[i] = f * inv_f;
      out.gen += (f - T(1)) * (f - T(1)) * inv_f;
      out.dgen_dfake[i] = T(2) * (f - T(1)) * inv_f;
    }
  }
  return out;
}

// Mean absolute difference, normalized by element count, with the gradient
// wrt the first argument (sign convention: d|a-b|/da, zero at ties).
template <class T>
struct L1Loss {
  T value = T(0);
  Tensor<T> grad;
};

template <class T>
L1Loss<T> l1_loss(const Tensor<T>& a, const Tensor<T>& b) {
  check(a.same_shape(b), "l1_loss shape mismatch: " + a.shape_string() +
                             " vs " + b.shape_string());
  L1Loss<T> out;
  out.grad = Tensor<T>(a.shape());
  const T inv = T(1) / static_cast<T>(a.size());
  for (std::int64_t i = 0; i < a.size(); ++i) {
    T d = a[i] - b[i];
    out.value += std::abs(d) * inv;
    out.grad[i] = d > T(0) ? inv : (d < T(0) ? -inv : T(0));
  }
  return out;
}

// Per-step scalar record of the six generator-side terms and their weighted
// total. Discriminator terms are tracked separately by the trainer.
struct LossBundle {
  double gan_a = 0, gan_b = 0;
  double cycle_a = 0, cycle_b = 0;
  double identity_a = 0, identity_b = 0;
  double total = 0;
};

inline LossBundle total_loss(double gan_a, double gan_b, double cycle_a,
                             double cycle_b, double identity_a,
                             double identity_b,
                             const LossWeights& w = LossWeights{}) {
  auto require_finite = [](double v, const char* name) {
    if (!std::isfinite(v))
      throw NumericalError(std::string("non-finite loss term: ") + name);
  };
  require_finite(gan_a, "gan_a");
  require_finite(gan_b, "gan_b");
  require_finite(cycle_a, "cycle_a");
  require_finite(cycle_b, "cycle_b");
  require_finite(identity_a, "identity_a");
  require_finite(identity_b, "identity_b");
  LossBundle b{gan_a,   gan_b,      cycle_a,    cycle_b,
               identity_a, identity_b, 0.0};
  b.total = w.adversarial * (gan_a + gan_b) + w.cycle * (cycle_a + cycle_b) +
            w.identity * (identity_a + identity_b);
  require_finite(b.total, "total");
  return b;
}

}  // namespace unshade
