#pragma once

#include <string>
#include <vector>

#include "unshade/networks.hpp"

namespace unshade {

// Per-image removal quality in CIELAB RMSE; region columns are NaN when the
// corresponding region is empty (undefined, excluded from the means).
struct EvalRow {
  std::string path;
  double rmse_all = 0;
  double rmse_shadow = 0;
  double rmse_nonshadow = 0;
};

enum class RegionSource { truth_masks, derived_masks, mixed };

struct EvalReport {
  std::vector<EvalRow> rows;
  double mean_all = 0, mean_shadow = 0, mean_nonshadow = 0;
  int skipped = 0;  // pairs whose truth image was missing
  RegionSource region_source = RegionSource::truth_masks;
};

const char* to_string(RegionSource s);

// Runs the shadow-removal generator on every shadow image of the pairs
// manifest at full size, writes predictions under out_dir/pred/, and scores
// them against the paired truth. Shadow/non-shadow regions come from the
// truth-mask sidecar (<truth>.png -> <truth>_mask.png) when present, else
// from mask extraction on the (shadow, truth) pair.
template <class T>
EvalReport evaluate_generator(const ResnetGenerator<T>& g_f,
                              const std::string& pairs_path,
                              const std::string& out_dir);

// Loads the generator from a checkpoint in its stored precision.
EvalReport evaluate_checkpoint(const std::string& ckpt_path,
                               const std::string& pairs_path,
                               const std::string& out_dir);

// report.csv: header, one row per image, then a MEAN summary row.
void write_report_csv(const EvalReport& report, const std::string& path);

}  // namespace unshade
