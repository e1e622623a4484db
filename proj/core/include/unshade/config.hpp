#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "unshade/losses.hpp"

namespace unshade {

// Training hyperparameters. Loaded from a flat key=value file whose keys
// match these field names exactly; unknown keys are rejected.
struct TrainConfig {
  double base_lr = 2e-4;
  int warm_epochs = 100;   // constant-rate epochs
  int decay_epochs = 100;  // linear decay to zero afterwards
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.999;
  int batch_size = 1;      // only 1 is supported
  int crop_size = 256;
  std::uint64_t seed = 0;
  AdvLossKind adv_loss = AdvLossKind::bce;
  bool flip = true;        // horizontal-flip augmentation
  int history_pool = 0;    // reserved; only 0 is supported
  int sample_every = 200;  // steps between sample grids

  int total_epochs() const { return warm_epochs + decay_epochs; }
  void validate() const;
};

enum class Background { flat_color, gradient, checker, perlin_texture };
enum class ShadowShape { polygon, ellipse, soft_blob };

Background background_from_string(const std::string& s);
ShadowShape shadow_shape_from_string(const std::string& s);
const char* to_string(Background b);
const char* to_string(ShadowShape s);

// Synthetic dataset recipe; same key=value file format.
struct SynthConfig {
  int n_shadow = 8;
  int n_shadowfree = 4;
  int image_size = 64;  // square, divisible by 4
  Background background = Background::gradient;
  ShadowShape shadow_shape = ShadowShape::polygon;
  double attenuation_min = 0.4;  // multiplicative darkening factor range
  double attenuation_max = 0.6;
  int penumbra_width = 0;  // box-blur radius applied to the mask edge
  std::uint64_t seed = 0;

  void validate() const;
};

// key=value text: one pair per line, '#' comments and blank lines ignored,
// whitespace around keys/values trimmed. Duplicate keys are rejected.
using KeyValues = std::vector<std::pair<std::string, std::string>>;
KeyValues parse_key_values(const std::string& text,
                           const std::string& origin = "<config>");
KeyValues load_key_values(const std::string& path);

// Applies pairs onto the default-constructed config; unknown keys, malformed
// values, and invariant violations raise UsageError.
TrainConfig train_config_from_kv(const KeyValues& kv);
SynthConfig synth_config_from_kv(const KeyValues& kv);

TrainConfig load_train_config(const std::string& path);
SynthConfig load_synth_config(const std::string& path);

// Round-trippable echo of every field (used by checkpointing).
KeyValues train_config_to_kv(const TrainConfig& cfg);

}  // namespace unshade
