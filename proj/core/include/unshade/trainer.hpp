#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "unshade/checkpoint.hpp"
#include "unshade/config.hpp"
#include "unshade/dataset.hpp"
#include "unshade/logging.hpp"
#include "unshade/losses.hpp"
#include "unshade/mask.hpp"
#include "unshade/networks.hpp"
#include "unshade/optim.hpp"

namespace unshade {

// One training step touches both learning branches: branch A starts from a
// shadow image (translate, extract + enqueue its mask, cycle back, identity
// with the zero mask), branch B starts from a shadow-free image (synthesize
// a shadow with a queued mask, cycle back, identity). Generators update on a
// combined backward pass; each discriminator then updates on (real, fake)
// score grids whose forward caches are reused from the loss computation.
template <class T>
class Trainer {
 public:
  Trainer(TrainConfig cfg, UnpairedDataset data, std::string out_dir)
      : cfg_(cfg),
        data_(std::move(data)),
        out_dir_(std::move(out_dir)),
        g_f_(3, 64, 9),
        g_s_(4, 64, 9),
        d_f_(3, 64),
        d_s_(3, 64),
        adam_gf_(cfg.adam_beta1, cfg.adam_beta2),
        adam_gs_(cfg.adam_beta1, cfg.adam_beta2),
        adam_df_(cfg.adam_beta1, cfg.adam_beta2),
        adam_ds_(cfg.adam_beta1, cfg.adam_beta2),
        queue_(MaskQueue::capacity_for(data_.shadow.size())),
        rng_(cfg.seed) {
    cfg_.validate();
    check_usage(!data_.shadow.empty() && !data_.shadowfree.empty(),
                "training needs at least one image per domain");
    for (const auto& img : data_.shadow) check_crop_fits(img);
    for (const auto& img : data_.shadowfree) check_crop_fits(img);
    nn::init_params(g_f_.params(), rng_);
    nn::init_params(g_s_.params(), rng_);
    nn::init_params(d_f_.params(), rng_);
    nn::init_params(d_s_.params(), rng_);
    shadow_order_.resize(data_.shadow.size());
    free_order_.resize(data_.shadowfree.size());
    std::iota(shadow_order_.begin(), shadow_order_.end(), 0);
    std::iota(free_order_.begin(), free_order_.end(), 0);
    reshuffle(shadow_order_, shadow_pos_);
    reshuffle(free_order_, free_pos_);
  }

  // Restores a snapshot; the stored config takes precedence over the one the
  // trainer was constructed with.
  void resume_from(const std::string& ckpt_path) {
    TrainSnapshot<T> snap = load_checkpoint<T>(ckpt_path);
    TrainConfig stored = train_config_from_kv(snap.config);
    cfg_ = stored;
    restore_net(snap.g_f, g_f_.fingerprint(), g_f_.params(), &adam_gf_);
    restore_net(snap.g_s, g_s_.fingerprint(), g_s_.params(), &adam_gs_);
    restore_net(snap.d_f, d_f_.fingerprint(), d_f_.params(), &adam_df_);
    restore_net(snap.d_s, d_s_.fingerprint(), d_s_.params(), &adam_ds_);
    epoch_ = snap.epoch;
    step_ = snap.step;
    check(snap.queue_capacity == queue_.capacity(),
          "checkpoint mask-queue capacity does not match this dataset");
    queue_ = MaskQueue(snap.queue_capacity);
    for (const auto& m : snap.queue) queue_.push(m);
    rng_.load_state(snap.rng_state);
    check(snap.shadow_order.size() == data_.shadow.size() &&
              snap.free_order.size() == data_.shadowfree.size(),
          "checkpoint dataset size does not match this dataset");
    shadow_order_.assign(snap.shadow_order.begin(), snap.shadow_order.end());
    free_order_.assign(snap.free_order.begin(), snap.free_order.end());
    shadow_pos_ = snap.shadow_pos;
    free_pos_ = snap.free_pos;
    LOG_INFO("resumed from %s at epoch %llu, step %llu", ckpt_path.c_str(),
             static_cast<unsigned long long>(epoch_),
             static_cast<unsigned long long>(step_));
  }

  // Runs the remaining epochs of the schedule, checkpointing once per epoch.
  void run() {
    namespace fs = std::filesystem;
    fs::create_directories(fs::path(out_dir_) / "samples");
    open_log();
    std::uint64_t total = static_cast<std::uint64_t>(cfg_.total_epochs());
    while (epoch_ < total) {
      begin_epoch();
      double lr = lr_at(static_cast<int>(epoch_), cfg_.base_lr,
                        cfg_.warm_epochs, cfg_.decay_epochs);
      double sum_total = 0;
      std::size_t steps = steps_per_epoch();
      for (std::size_t k = 0; k < steps; ++k) {
        const RawImage& s = next_image(data_.shadow, shadow_order_,
                                       shadow_pos_, shadow_is_larger());
        const RawImage& f = next_image(data_.shadowfree, free_order_,
                                       free_pos_, !shadow_is_larger());
        LossBundle bundle = step(s, f, lr);
        sum_total += bundle.total;
      }
      ++epoch_;
      LOG_INFO("epoch %llu/%llu: lr=%.6g mean total loss %.6g",
               static_cast<unsigned long long>(epoch_),
               static_cast<unsigned long long>(total), lr,
               sum_total / static_cast<double>(steps));
      char name[32];
      std::snprintf(name, sizeof name, "epoch_%llu.ckpt",
                    static_cast<unsigned long long>(epoch_));
      save_snapshot((fs::path(out_dir_) / name).string());
    }
  }

  // One optimization step on a (shadow, shadow-free) sample at the given
  // learning rate. Public so tests can drive single steps deterministically.
  LossBundle step(const RawImage& shadow_raw, const RawImage& free_raw,
                  double lr) {
    Image s_img = augment(shadow_raw);
    Image f_img = augment(free_raw);
    Tensor<T> x_s = image_to_tensor<T>(s_img);
    Tensor<T> x_f = image_to_tensor<T>(f_img);
    const int hh = s_img.height, ww = s_img.width;

    // Branch A: from the shadow image.
    GenCache<T> cf_a;
    Tensor<T> fake_f = g_f_.forward(x_s, &cf_a);
    Image fake_f_img = tensor_to_image(fake_f);
    ShadowMask m_l = make_mask(s_img, fake_f_img);
    queue_.push(m_l);
    GenCache<T> cs_cycle_a;
    Tensor<T> recon_s =
        g_s_.forward(with_mask_channel(fake_f, m_l), &cs_cycle_a);
    GenCache<T> cs_ident_a;
    Tensor<T> ident_s =
        g_s_.forward(with_mask_channel(x_s, zero_mask(hh, ww)), &cs_ident_a);
    nn::Cache<T> cdf_fake;
    Tensor<T> df_fake_scores = d_f_.forward(fake_f, &cdf_fake);

    // Branch B: from the shadow-free image.
    ShadowMask m_r = sample_or_zero(queue_, rng_, hh, ww);
    GenCache<T> cs_b;
    Tensor<T> fake_s = g_s_.forward(with_mask_channel(x_f, m_r), &cs_b);
    GenCache<T> cf_cycle_b;
    Tensor<T> recon_f = g_f_.forward(fake_s, &cf_cycle_b);
    GenCache<T> cf_ident_b;
    Tensor<T> ident_f = g_f_.forward(x_f, &cf_ident_b);
    nn::Cache<T> cds_fake;
    Tensor<T> ds_fake_scores = d_s_.forward(fake_s, &cds_fake);

    // Real-side discriminator scores (cached for the update below).
    nn::Cache<T> cdf_real;
    Tensor<T> df_real_scores = d_f_.forward(x_f, &cdf_real);
    nn::Cache<T> cds_real;
    Tensor<T> ds_real_scores = d_s_.forward(x_s, &cds_real);

    AdvTerms<T> adv_a = adv_terms(df_real_scores, df_fake_scores,
                                  cfg_.adv_loss);
    AdvTerms<T> adv_b = adv_terms(ds_real_scores, ds_fake_scores,
                                  cfg_.adv_loss);
    L1Loss<T> cyc_a = l1_loss(recon_s, x_s);
    L1Loss<T> cyc_b = l1_loss(recon_f, x_f);
    L1Loss<T> id_a = l1_loss(ident_s, x_s);
    L1Loss<T> id_b = l1_loss(ident_f, x_f);
    LossBundle bundle = total_loss(
        static_cast<double>(adv_a.gen), static_cast<double>(adv_b.gen),
        static_cast<double>(cyc_a.value), static_cast<double>(cyc_b.value),
        static_cast<double>(id_a.value), static_cast<double>(id_b.value),
        weights_);
    last_disc_f_ = static_cast<double>(adv_a.disc);
    last_disc_s_ = static_cast<double>(adv_b.disc);

    // Generator update: one combined backward over both branches.
    nn::zero_grads(g_f_.params());
    nn::zero_grads(g_s_.params());
    Tensor<T> d_fake_f = d_f_.backward(
        scaled(adv_a.dgen_dfake, weights_.adversarial), cdf_fake, false, true);
    Tensor<T> g4 =
        g_s_.backward(scaled(cyc_a.grad, weights_.cycle), cs_cycle_a, true,
                      true);
    add_first_planes(d_fake_f, g4);
    g_s_.backward(scaled(id_a.grad, weights_.identity), cs_ident_a, true,
                  false);
    g_f_.backward(d_fake_f, cf_a, true, false);

    Tensor<T> d_fake_s = d_s_.backward(
        scaled(adv_b.dgen_dfake, weights_.adversarial), cds_fake, false, true);
    Tensor<T> g3 = g_f_.backward(scaled(cyc_b.grad, weights_.cycle),
                                 cf_cycle_b, true, true);
    for (std::int64_t i = 0; i < d_fake_s.size(); ++i) d_fake_s[i] += g3[i];
    g_f_.backward(scaled(id_b.grad, weights_.identity), cf_ident_b, true,
                  false);
    g_s_.backward(d_fake_s, cs_b, true, false);
    adam_gf_.step(g_f_.params(), lr);
    adam_gs_.step(g_s_.params(), lr);

    // Discriminator updates on the same (real, fake) pairs; forward caches
    // are still valid because discriminator parameters were not touched.
    nn::zero_grads(d_f_.params());
    d_f_.backward(adv_a.ddisc_dreal, cdf_real, true, false);
    d_f_.backward(adv_a.ddisc_dfake, cdf_fake, true, false);
    adam_df_.step(d_f_.params(), lr);
    nn::zero_grads(d_s_.params());
    d_s_.backward(adv_b.ddisc_dreal, cds_real, true, false);
    d_s_.backward(adv_b.ddisc_dfake, cds_fake, true, false);
    adam_ds_.step(d_s_.params(), lr);

    ++step_;
    log_row(bundle, lr);
    if (log_.is_open() && step_ % static_cast<std::uint64_t>(
                                      cfg_.sample_every) == 0)
      write_sample(s_img, fake_f_img, recon_s, m_l);
    return bundle;
  }

  // Branch B mask choice: a queued mask when available, otherwise the
  // zero mask (the "add no shadow" signal) until branch A fills the queue.
  static ShadowMask sample_or_zero(const MaskQueue& queue, Rng& rng, int h,
                                   int w) {
    if (queue.empty()) return zero_mask(h, w);
    return queue.sample(rng);
  }

  TrainSnapshot<T> snapshot() {
    TrainSnapshot<T> snap;
    snap.g_f = snapshot_net(g_f_.fingerprint(), g_f_.params(), adam_gf_);
    snap.g_s = snapshot_net(g_s_.fingerprint(), g_s_.params(), adam_gs_);
    snap.d_f = snapshot_net(d_f_.fingerprint(), d_f_.params(), adam_df_);
    snap.d_s = snapshot_net(d_s_.fingerprint(), d_s_.params(), adam_ds_);
    snap.epoch = epoch_;
    snap.step = step_;
    snap.queue_capacity = queue_.capacity();
    for (std::size_t i = 0; i < queue_.size(); ++i)
      snap.queue.push_back(queue_.at(i));
    snap.rng_state = rng_.save_state();
    snap.shadow_order.assign(shadow_order_.begin(), shadow_order_.end());
    snap.free_order.assign(free_order_.begin(), free_order_.end());
    snap.shadow_pos = shadow_pos_;
    snap.free_pos = free_pos_;
    snap.config = train_config_to_kv(cfg_);
    return snap;
  }

  void save_snapshot(const std::string& path) {
    save_checkpoint(path, snapshot());
  }

  const TrainConfig& config() const { return cfg_; }
  ResnetGenerator<T>& gen_f() { return g_f_; }
  ResnetGenerator<T>& gen_s() { return g_s_; }
  PatchDiscriminator<T>& disc_f() { return d_f_; }
  PatchDiscriminator<T>& disc_s() { return d_s_; }
  const MaskQueue& mask_queue() const { return queue_; }
  Rng& rng() { return rng_; }
  std::uint64_t completed_epochs() const { return epoch_; }
  std::uint64_t completed_steps() const { return step_; }
  double last_disc_f_loss() const { return last_disc_f_; }
  double last_disc_s_loss() const { return last_disc_s_; }
  std::size_t steps_per_epoch() const {
    return std::max(data_.shadow.size(), data_.shadowfree.size());
  }

 private:
  void check_crop_fits(const RawImage& img) const {
    check_usage(img.height >= cfg_.crop_size && img.width >= cfg_.crop_size,
                "image smaller than crop_size");
  }

  bool shadow_is_larger() const {
    return data_.shadow.size() >= data_.shadowfree.size();
  }

  void reshuffle(std::vector<std::size_t>& order, std::size_t& pos) {
    rng_.shuffle(order);
    pos = 0;
  }

  // The larger domain defines the epoch and reshuffles at epoch start; the
  // smaller one reshuffles whenever it runs out mid-epoch.
  void begin_epoch() {
    if (shadow_is_larger())
      reshuffle(shadow_order_, shadow_pos_);
    else
      reshuffle(free_order_, free_pos_);
  }

  const RawImage& next_image(const std::vector<RawImage>& pool,
                             std::vector<std::size_t>& order,
                             std::size_t& pos, bool is_larger) {
    if (pos >= order.size()) {
      check(!is_larger, "epoch accounting overran the larger domain");
      reshuffle(order, pos);
    }
    return pool[order[pos++]];
  }

  // Random square crop (offsets always drawn, even when zero) plus optional
  // horizontal flip.
  Image augment(const RawImage& raw) {
    Image img = encode_image(raw);
    int oy = static_cast<int>(rng_.uniform_int(
        static_cast<std::uint64_t>(img.height - cfg_.crop_size + 1)));
    int ox = static_cast<int>(rng_.uniform_int(
        static_cast<std::uint64_t>(img.width - cfg_.crop_size + 1)));
    img = crop(img, oy, ox, cfg_.crop_size, cfg_.crop_size);
    if (cfg_.flip && rng_.bernoulli(0.5)) img = hflip(img);
    return img;
  }

  static Tensor<T> scaled(const Tensor<T>& t, double s) {
    Tensor<T> out(t.shape());
    for (std::int64_t i = 0; i < t.size(); ++i)
      out[i] = t[i] * static_cast<T>(s);
    return out;
  }

  // Adds a [4,H,W] gradient's first three planes onto a [3,H,W] gradient
  // (the mask plane of a generator input receives no useful gradient).
  static void add_first_planes(Tensor<T>& dst3, const Tensor<T>& src4) {
    for (std::int64_t i = 0; i < dst3.size(); ++i) dst3[i] += src4[i];
  }

  void open_log() {
    namespace fs = std::filesystem;
    fs::path p = fs::path(out_dir_) / "losses.csv";
    bool fresh = !fs::exists(p) || fs::file_size(p) == 0;
    log_.open(p, std::ios::app);
    check(log_.good(), "cannot open loss log: " + p.string());
    if (fresh)
      log_ << "step,epoch,gan_a,gan_b,cycle_a,cycle_b,id_a,id_b,total,lr\n";
  }

  void log_row(const LossBundle& b, double lr) {
    if (!log_.is_open()) return;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%llu,%llu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g",
                  static_cast<unsigned long long>(step_),
                  static_cast<unsigned long long>(epoch_), b.gan_a, b.gan_b,
                  b.cycle_a, b.cycle_b, b.identity_a, b.identity_b, b.total,
                  lr);
    log_ << buf << "\n";
    log_.flush();
  }

  void write_sample(const Image& input, const Image& fake_f,
                    const Tensor<T>& recon_s, const ShadowMask& m_l) {
    namespace fs = std::filesystem;
    char name[32];
    std::snprintf(name, sizeof name, "step_%llu.png",
                  static_cast<unsigned long long>(step_));
    RawImage grid =
        hstack({decode_image(input), decode_image(fake_f),
                decode_image(tensor_to_image(recon_s)), mask_to_raw(m_l)});
    write_png_rgb8((fs::path(out_dir_) / "samples" / name).string(), grid);
  }

  TrainConfig cfg_;
  UnpairedDataset data_;
  std::string out_dir_;
  LossWeights weights_;
  ResnetGenerator<T> g_f_;
  ResnetGenerator<T> g_s_;
  PatchDiscriminator<T> d_f_;
  PatchDiscriminator<T> d_s_;
  Adam<T> adam_gf_, adam_gs_, adam_df_, adam_ds_;
  MaskQueue queue_;
  Rng rng_;
  std::vector<std::size_t> shadow_order_, free_order_;
  std::size_t shadow_pos_ = 0, free_pos_ = 0;
  std::uint64_t epoch_ = 0, step_ = 0;
  double last_disc_f_ = 0, last_disc_s_ = 0;
  std::ofstream log_;
};

}  // namespace unshade
