#pragma once

#include <string>
#include <vector>

#include "unshade/png_io.hpp"

namespace unshade {

// Two unpaired image pools. Decoded 8-bit pixels are kept in memory;
// normalization happens on access (the pools are small at training time).
struct UnpairedDataset {
  std::vector<RawImage> shadow;
  std::vector<RawImage> shadowfree;
  std::vector<std::string> shadow_paths;
  std::vector<std::string> shadowfree_paths;
};

// Manifest format: one image per line, "<label>\t<relpath>" where label is
// "s" (shadow) or "f" (shadow-free). Paths are relative to the manifest's
// directory. Blank lines and lines starting with '#' are skipped.
UnpairedDataset load_manifest(const std::string& manifest_path);

struct EvalPair {
  std::string shadow_path;
  std::string truth_path;
};

// Pairs file: "<shadow relpath>\t<truth relpath>" per line, relative to the
// file's directory; same blank/comment rules as the manifest.
std::vector<EvalPair> load_pairs(const std::string& pairs_path);

}  // namespace unshade
