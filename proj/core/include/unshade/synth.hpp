#pragma once

#include <string>

#include "unshade/config.hpp"
#include "unshade/image.hpp"
#include "unshade/png_io.hpp"

namespace unshade {

// One synthetic scene with a shadow cast on it. `mask` records exactly the
// pixels the generator darkened (its own geometry, not a threshold of the
// pair), so it doubles as ground truth for mask-extraction tests.
struct SynthPair {
  RawImage shadow;
  RawImage truth;
  ShadowMask mask;
};

// Deterministic functions of (config, index): every image has its own seed
// derived from the config seed, and the shadow/shadow-free pools use
// disjoint streams so the dataset is unpaired at the scene level.
SynthPair synth_shadow_image(const SynthConfig& cfg, int index);
RawImage synth_free_image(const SynthConfig& cfg, int index);

struct SynthResult {
  std::string manifest_path;  // training manifest (no truth access)
  std::string pairs_path;     // eval-only pairs manifest under truth/
};

// Writes out/images/*.png, out/manifest.tsv, and hidden ground truth under
// out/truth/ (pairs.tsv, *_truth.png, *_truth_mask.png). The truth-mask path
// for a truth image is its path with ".png" replaced by "_mask.png".
SynthResult synth_dataset(const SynthConfig& cfg, const std::string& out_dir);

}  // namespace unshade
