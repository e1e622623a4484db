// Command-line entry point: train / infer / eval / synth / inspect-masks.
//
// Exit codes: 0 success, 1 usage error (bad flags, bad config values,
// mismatched resynthesis mask), 2 runtime or numerical failure.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "unshade/checkpoint.hpp"
#include "unshade/config.hpp"
#include "unshade/dataset.hpp"
#include "unshade/errors.hpp"
#include "unshade/eval.hpp"
#include "unshade/image.hpp"
#include "unshade/logging.hpp"
#include "unshade/losses.hpp"
#include "unshade/mask.hpp"
#include "unshade/networks.hpp"
#include "unshade/png_io.hpp"
#include "unshade/synth.hpp"
#include "unshade/trainer.hpp"

namespace fs = std::filesystem;
using namespace unshade;

namespace {

// ---------------------------------------------------------------------- train

template <class T>
int run_train(const TrainConfig& cfg, const std::string& manifest,
              const std::string& out_dir, const std::string& resume) {
  UnpairedDataset data = load_manifest(manifest);
  fs::create_directories(out_dir);
  Trainer<T> trainer(cfg, std::move(data), out_dir);
  if (!resume.empty()) trainer.resume_from(resume);
  // Echo the effective config (after any resume override) for reproducibility.
  {
    std::ofstream echo(fs::path(out_dir) / "config.txt");
    for (const auto& [k, v] : train_config_to_kv(trainer.config()))
      echo << k << "=" << v << "\n";
  }
  trainer.run();
  return 0;
}

// ---------------------------------------------------------------------- infer

std::vector<fs::path> collect_inputs(const std::string& input) {
  std::vector<fs::path> files;
  fs::path p(input);
  if (fs::is_directory(p)) {
    for (const auto& e : fs::directory_iterator(p))
      if (e.is_regular_file() && e.path().extension() == ".png")
        files.push_back(e.path());
    std::sort(files.begin(), files.end());
    check_usage(!files.empty(), "no .png files in " + input);
  } else {
    check(fs::exists(p), "no such input: " + input);
    files.push_back(p);
  }
  return files;
}

template <class T>
int run_infer(const std::string& ckpt, const std::string& input,
              const std::string& out_dir) {
  TrainSnapshot<T> snap = load_checkpoint<T>(ckpt);
  ResnetGenerator<T> g_f(3, 64, 9);
  nn::ParamList<T> pf = g_f.params();
  restore_net(snap.g_f, g_f.fingerprint(), pf, static_cast<Adam<T>*>(nullptr));
  fs::create_directories(out_dir);
  for (const fs::path& in : collect_inputs(input)) {
    Image img = encode_image(read_png_rgb8(in.string()));
    Image pred = generate_shadowfree_fullsize(g_f, img);
    std::string dst = (fs::path(out_dir) / in.filename()).string();
    write_png_rgb8(dst, decode_image(pred));
    LOG_INFO("wrote %s", dst.c_str());
  }
  return 0;
}

// ----------------------------------------------------------------------- eval

int run_eval(const std::string& ckpt, const std::string& pairs,
             const std::string& out_dir) {
  EvalReport report = evaluate_checkpoint(ckpt, pairs, out_dir);
  std::string csv = (fs::path(out_dir) / "report.csv").string();
  write_report_csv(report, csv);
  std::printf("images %zu skipped %d regions %s\n", report.rows.size(),
              report.skipped, to_string(report.region_source));
  std::printf("rmse_all %.9g\nrmse_shadow %.9g\nrmse_nonshadow %.9g\n",
              report.mean_all, report.mean_shadow, report.mean_nonshadow);
  return 0;
}

// ---------------------------------------------------------------------- synth

int run_synth(const std::string& config_path, const std::string& out_dir,
              bool seed_set, std::uint64_t seed) {
  SynthConfig cfg;
  if (!config_path.empty()) cfg = load_synth_config(config_path);
  if (seed_set) cfg.seed = seed;
  cfg.validate();
  SynthResult res = synth_dataset(cfg, out_dir);
  std::printf("manifest %s\npairs %s\n", res.manifest_path.c_str(),
              res.pairs_path.c_str());
  return 0;
}

// -------------------------------------------------------------- inspect-masks

template <class T>
int run_inspect(const std::string& ckpt, const std::string& image_path,
                const std::string& out_dir, const std::string& resynth_path) {
  TrainSnapshot<T> snap = load_checkpoint<T>(ckpt);
  ResnetGenerator<T> g_f(3, 64, 9);
  nn::ParamList<T> pf = g_f.params();
  restore_net(snap.g_f, g_f.fingerprint(), pf, static_cast<Adam<T>*>(nullptr));
  Image img = encode_image(read_png_rgb8(image_path));
  Image pred = generate_shadowfree_fullsize(g_f, img);
  ShadowMask mask = make_mask(img, pred);
  fs::create_directories(out_dir);
  GrayImage gray = mask_to_gray(mask);
  write_png_gray8((fs::path(out_dir) / "mask.png").string(), gray.height,
                  gray.width, gray.data);
  write_png_rgb8((fs::path(out_dir) / "pred.png").string(),
                 decode_image(pred));
  write_png_rgb8(
      (fs::path(out_dir) / "grid.png").string(),
      hstack({decode_image(img), decode_image(pred), mask_to_raw(mask)}));
  if (!resynth_path.empty()) {
    RawImage raw = read_png_rgb8(resynth_path);
    check_usage(raw.height == img.height && raw.width == img.width,
                "resynthesis mask size does not match the input image");
    ShadowMask rmask = mask_from_raw(raw);
    ResnetGenerator<T> g_s(4, 64, 9);
    nn::ParamList<T> ps = g_s.params();
    restore_net(snap.g_s, g_s.fingerprint(), ps,
                static_cast<Adam<T>*>(nullptr));
    Image resyn = generate_shadow_fullsize(g_s, pred, rmask);
    write_png_rgb8((fs::path(out_dir) / "resynth.png").string(),
                   decode_image(resyn));
    L1Loss<T> gap = l1_loss(image_to_tensor<T>(resyn), image_to_tensor<T>(pred));
    LOG_INFO("resynthesis L1 gap vs predicted shadow-free: %.6g",
             static_cast<double>(gap.value));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"unshade: mask-guided unpaired shadow removal"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  auto* seed_opt =
      app.add_option("--seed", seed, "RNG seed (train, synth)");
  std::string precision = "single";
  app.add_option("--precision", precision, "training float precision")
      ->check(CLI::IsMember({"single", "double"}));
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "log verbosity")
      ->check(CLI::IsMember({"debug", "info", "warn", "error"}));

  auto* train =
      app.add_subcommand("train", "Train the removal/synthesis cycle");
  train->fallthrough();
  std::string t_config, t_manifest, t_out, t_resume, t_adv;
  int t_epochs = 0, t_crop = 0;
  train->add_option("--config", t_config, "key=value training config file");
  train->add_option("--data-manifest", t_manifest, "dataset manifest (TSV)")
      ->required();
  train->add_option("--out", t_out, "output directory")->required();
  auto* t_epochs_opt = train->add_option(
      "--epochs", t_epochs,
      "total epochs (1..200), split half constant-rate / half decay");
  auto* t_crop_opt = train->add_option("--crop", t_crop, "training crop size");
  train->add_option("--resume", t_resume, "checkpoint to resume from");
  auto* t_adv_opt = train->add_option("--adv-loss", t_adv, "adversarial loss")
                        ->check(CLI::IsMember({"bce", "lsgan"}));

  auto* infer =
      app.add_subcommand("infer", "Remove shadows from images");
  infer->fallthrough();
  std::string i_ckpt, i_input, i_out;
  infer->add_option("--ckpt", i_ckpt, "trained checkpoint")->required();
  infer->add_option("--input", i_input, "input PNG file or directory")
      ->required();
  infer->add_option("--out", i_out, "output directory")->required();

  auto* eval_cmd =
      app.add_subcommand("eval", "Score a checkpoint on paired ground truth");
  eval_cmd->fallthrough();
  std::string e_ckpt, e_pairs, e_out;
  eval_cmd->add_option("--ckpt", e_ckpt, "trained checkpoint")->required();
  eval_cmd->add_option("--pairs", e_pairs, "pairs manifest (TSV)")->required();
  eval_cmd->add_option("--out", e_out, "output directory")->required();

  auto* synth =
      app.add_subcommand("synth", "Generate a synthetic unpaired dataset");
  synth->fallthrough();
  std::string s_config, s_out;
  synth->add_option("--config", s_config, "key=value dataset recipe");
  synth->add_option("--out", s_out, "output directory")->required();

  auto* inspect = app.add_subcommand(
      "inspect-masks", "Extract a shadow mask and optionally resynthesize");
  inspect->fallthrough();
  std::string m_ckpt, m_image, m_out, m_resynth;
  inspect->add_option("--ckpt", m_ckpt, "trained checkpoint")->required();
  inspect->add_option("--image", m_image, "shadow image (PNG)")->required();
  inspect->add_option("--out", m_out, "output directory")->required();
  inspect->add_option("--resynthesize", m_resynth,
                      "binary mask PNG to re-apply as a synthetic shadow");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  log::set_level(log_level);

  try {
    if (train->parsed()) {
      TrainConfig cfg;
      if (!t_config.empty()) cfg = load_train_config(t_config);
      if (seed_opt->count()) cfg.seed = seed;
      if (t_epochs_opt->count()) {
        check_usage(t_epochs >= 1 && t_epochs <= 200,
                    "--epochs must be in [1, 200]");
        cfg.warm_epochs = t_epochs / 2;
        cfg.decay_epochs = t_epochs - t_epochs / 2;
      }
      if (t_crop_opt->count()) cfg.crop_size = t_crop;
      if (t_adv_opt->count()) cfg.adv_loss = adv_loss_from_string(t_adv);
      cfg.validate();
      if (precision == "double")
        return run_train<double>(cfg, t_manifest, t_out, t_resume);
      return run_train<float>(cfg, t_manifest, t_out, t_resume);
    }
    if (infer->parsed()) {
      if (checkpoint_precision(i_ckpt) == 'f')
        return run_infer<float>(i_ckpt, i_input, i_out);
      return run_infer<double>(i_ckpt, i_input, i_out);
    }
    if (eval_cmd->parsed()) return run_eval(e_ckpt, e_pairs, e_out);
    if (synth->parsed())
      return run_synth(s_config, s_out, seed_opt->count() > 0, seed);
    if (inspect->parsed()) {
      if (checkpoint_precision(m_ckpt) == 'f')
        return run_inspect<float>(m_ckpt, m_image, m_out, m_resynth);
      return run_inspect<double>(m_ckpt, m_image, m_out, m_resynth);
    }
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
