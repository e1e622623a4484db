#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "unshade/config.hpp"
#include "unshade/image.hpp"
#include "unshade/optim.hpp"
#include "unshade/tensor.hpp"

namespace unshade {

// Everything needed to resume training bit-exactly: per-network named
// parameter tensors + Adam moments, the mask queue (RLE-encoded), the
// trainer RNG state, the per-domain visit orders, and a config echo.
template <class T>
struct NetSnapshot {
  std::string fingerprint;
  std::vector<std::pair<std::string, Tensor<T>>> tensors;
  std::int64_t adam_t = 0;
  std::vector<std::vector<T>> adam_m, adam_v;
};

template <class T>
struct TrainSnapshot {
  NetSnapshot<T> g_f, g_s, d_f, d_s;
  std::uint64_t epoch = 0;  // completed epochs
  std::uint64_t step = 0;   // completed steps
  std::uint64_t queue_capacity = 1;
  std::vector<ShadowMask> queue;  // oldest first
  std::string rng_state;
  std::vector<std::uint64_t> shadow_order, free_order;
  std::uint64_t shadow_pos = 0, free_pos = 0;
  KeyValues config;
};

template <class T>
void save_checkpoint(const std::string& path, const TrainSnapshot<T>& snap);

// Stored element type: 'f' (single) or 'd' (double).
char checkpoint_precision(const std::string& path);

// Fails with Error if the stored precision does not match T.
template <class T>
TrainSnapshot<T> load_checkpoint(const std::string& path);

template <class T>
NetSnapshot<T> snapshot_net(const std::string& fingerprint,
                            const nn::ParamList<T>& params,
                            const Adam<T>& adam) {
  NetSnapshot<T> net;
  net.fingerprint = fingerprint;
  for (const auto& p : params) net.tensors.emplace_back(p.name, *p.value);
  net.adam_t = adam.steps();
  net.adam_m = adam.first_moments();
  net.adam_v = adam.second_moments();
  return net;
}

// Writes stored tensors back into a parameter list, insisting on identical
// architecture (fingerprint), names, and shapes. Pass a null Adam to restore
// parameters only (inference).
template <class T>
void restore_net(const NetSnapshot<T>& snap, const std::string& fingerprint,
                 const nn::ParamList<T>& params, Adam<T>* adam) {
  check(snap.fingerprint == fingerprint,
        "checkpoint architecture mismatch: stored '" + snap.fingerprint +
            "', expected '" + fingerprint + "'");
  check(snap.tensors.size() == params.size(),
        "checkpoint parameter count mismatch");
  for (std::size_t k = 0; k < params.size(); ++k) {
    const auto& [name, value] = snap.tensors[k];
    check(name == params[k].name, "checkpoint parameter name mismatch: " +
                                      name + " vs " + params[k].name);
    check(value.same_shape(*params[k].value),
          "checkpoint parameter shape mismatch for " + name);
    *params[k].value = value;
  }
  if (adam) {
    check(snap.adam_m.empty() || snap.adam_m.size() == params.size(),
          "checkpoint optimizer state mismatch");
    adam->restore(snap.adam_t, snap.adam_m, snap.adam_v);
  }
}

}  // namespace unshade
