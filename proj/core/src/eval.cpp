#include "unshade/eval.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "unshade/checkpoint.hpp"
#include "unshade/colorspace.hpp"
#include "unshade/dataset.hpp"
#include "unshade/errors.hpp"
#include "unshade/logging.hpp"
#include "unshade/mask.hpp"

namespace unshade {

namespace fs = std::filesystem;

const char* to_string(RegionSource s) {
  switch (s) {
    case RegionSource::truth_masks:
      return "truth-masks";
    case RegionSource::derived_masks:
      return "derived-masks";
    default:
      return "mixed";
  }
}

namespace {

// <dir>/x.png -> <dir>/x_mask.png (appended when there is no .png suffix).
std::string mask_sidecar(const std::string& truth_path) {
  const std::string suffix = ".png";
  if (truth_path.size() >= suffix.size() &&
      truth_path.compare(truth_path.size() - suffix.size(), suffix.size(),
                         suffix) == 0)
    return truth_path.substr(0, truth_path.size() - suffix.size()) +
           "_mask.png";
  return truth_path + "_mask.png";
}

double mean_ignoring_nan(const std::vector<EvalRow>& rows,
                         double EvalRow::* field) {
  double sum = 0;
  int n = 0;
  for (const auto& r : rows) {
    double v = r.*field;
    if (std::isnan(v)) continue;
    sum += v;
    ++n;
  }
  return n ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

template <class T>
EvalReport evaluate_generator(const ResnetGenerator<T>& g_f,
                              const std::string& pairs_path,
                              const std::string& out_dir) {
  std::vector<EvalPair> pairs = load_pairs(pairs_path);
  fs::path pred_dir = fs::path(out_dir) / "pred";
  fs::create_directories(pred_dir);

  EvalReport rep;
  bool used_truth_masks = false, used_derived_masks = false;
  for (const auto& pr : pairs) {
    if (!fs::exists(pr.truth_path)) {
      LOG_WARN("eval: truth image missing, skipping %s (expected %s)",
               pr.shadow_path.c_str(), pr.truth_path.c_str());
      ++rep.skipped;
      continue;
    }
    Image shadow = encode_image(read_png_rgb8(pr.shadow_path));
    Image truth = encode_image(read_png_rgb8(pr.truth_path));
    check(shadow.height == truth.height && shadow.width == truth.width,
          "eval: size mismatch between " + pr.shadow_path + " and " +
              pr.truth_path);

    Image pred = generate_shadowfree_fullsize(g_f, shadow);
    std::string pred_path =
        (pred_dir / fs::path(pr.shadow_path).filename()).string();
    write_png_rgb8(pred_path, decode_image(pred));

    ShadowMask region;
    std::string sidecar = mask_sidecar(pr.truth_path);
    if (fs::exists(sidecar)) {
      region = mask_from_raw(read_png_rgb8(sidecar));
      check(region.height == truth.height && region.width == truth.width,
            "eval: mask size mismatch for " + sidecar);
      used_truth_masks = true;
    } else {
      region = make_mask(shadow, truth);
      used_derived_masks = true;
    }

    LabImage lab_pred = to_lab(pred);
    LabImage lab_truth = to_lab(truth);
    EvalRow row;
    row.path = pr.shadow_path;
    row.rmse_all = rmse_lab(lab_pred, lab_truth);
    row.rmse_shadow = rmse_lab_region(lab_pred, lab_truth, region, true);
    row.rmse_nonshadow = rmse_lab_region(lab_pred, lab_truth, region, false);
    rep.rows.push_back(std::move(row));
  }

  rep.mean_all = mean_ignoring_nan(rep.rows, &EvalRow::rmse_all);
  rep.mean_shadow = mean_ignoring_nan(rep.rows, &EvalRow::rmse_shadow);
  rep.mean_nonshadow = mean_ignoring_nan(rep.rows, &EvalRow::rmse_nonshadow);
  rep.region_source = used_truth_masks
                          ? (used_derived_masks ? RegionSource::mixed
                                                : RegionSource::truth_masks)
                          : RegionSource::derived_masks;
  LOG_INFO(
      "eval: %zu images (%d skipped), regions from %s; "
      "RMSE all=%.4f shadow=%.4f non-shadow=%.4f",
      rep.rows.size(), rep.skipped, to_string(rep.region_source), rep.mean_all,
      rep.mean_shadow, rep.mean_nonshadow);
  return rep;
}

template EvalReport evaluate_generator<float>(const ResnetGenerator<float>&,
                                              const std::string&,
                                              const std::string&);
template EvalReport evaluate_generator<double>(const ResnetGenerator<double>&,
                                               const std::string&,
                                               const std::string&);

namespace {

template <class T>
EvalReport evaluate_with(const std::string& ckpt_path,
                         const std::string& pairs_path,
                         const std::string& out_dir) {
  TrainSnapshot<T> snap = load_checkpoint<T>(ckpt_path);
  ResnetGenerator<T> g_f(3, 64, 9);
  restore_net(snap.g_f, g_f.fingerprint(), g_f.params(),
              static_cast<Adam<T>*>(nullptr));
  return evaluate_generator(g_f, pairs_path, out_dir);
}

}  // namespace

EvalReport evaluate_checkpoint(const std::string& ckpt_path,
                               const std::string& pairs_path,
                               const std::string& out_dir) {
  return checkpoint_precision(ckpt_path) == 'f'
             ? evaluate_with<float>(ckpt_path, pairs_path, out_dir)
             : evaluate_with<double>(ckpt_path, pairs_path, out_dir);
}

void write_report_csv(const EvalReport& report, const std::string& path) {
  std::ofstream out(path);
  check(out.good(), "eval: cannot open report file " + path);
  out << "path,rmse_all,rmse_shadow,rmse_nonshadow\n";
  char buf[128];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, ",%.9g,%.9g,%.9g", r.rmse_all,
                  r.rmse_shadow, r.rmse_nonshadow);
    out << r.path << buf << "\n";
  }
  std::snprintf(buf, sizeof buf, "MEAN,%.9g,%.9g,%.9g", report.mean_all,
                report.mean_shadow, report.mean_nonshadow);
  out << buf << "\n";
  check(out.good(), "eval: failed writing report file " + path);
}

}  // namespace unshade
