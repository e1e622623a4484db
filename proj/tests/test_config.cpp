#include <doctest.h>

#include <fstream>

#include "support/tmpdir.hpp"
#include "unshade/config.hpp"
#include "unshade/errors.hpp"

using namespace unshade;

TEST_CASE("config: defaults satisfy their own invariants") {
  TrainConfig t;
  CHECK_NOTHROW(t.validate());
  CHECK(t.base_lr == 2e-4);
  CHECK(t.warm_epochs == 100);
  CHECK(t.decay_epochs == 100);
  CHECK(t.total_epochs() == 200);
  CHECK(t.adam_beta1 == 0.5);
  CHECK(t.adam_beta2 == 0.999);
  CHECK(t.batch_size == 1);
  CHECK(t.crop_size == 256);
  CHECK(t.adv_loss == AdvLossKind::bce);
  CHECK(t.flip);

  SynthConfig s;
  CHECK_NOTHROW(s.validate());
  CHECK(s.background == Background::gradient);
  CHECK(s.shadow_shape == ShadowShape::polygon);
}

TEST_CASE("config: key=value parsing handles comments and whitespace") {
  KeyValues kv = parse_key_values(
      "# a comment\n"
      "  base_lr = 1e-3  \r\n"
      "\n"
      "   # indented comment\n"
      "seed=42\n");
  REQUIRE(kv.size() == 2);
  CHECK(kv[0].first == "base_lr");
  CHECK(kv[0].second == "1e-3");
  CHECK(kv[1].first == "seed");
  CHECK(kv[1].second == "42");
}

TEST_CASE("config: malformed lines are rejected with line numbers") {
  CHECK_THROWS_WITH_AS(parse_key_values("base_lr\n", "f"),
                       "f:1: expected key=value, got 'base_lr'", UsageError);
  CHECK_THROWS_WITH_AS(parse_key_values("ok=1\n= 3\n", "f"),
                       "f:2: empty key", UsageError);
  CHECK_THROWS_WITH_AS(parse_key_values("a=1\na=2\n", "f"),
                       "f:2: duplicate key 'a'", UsageError);
}

TEST_CASE("config: training file round-trips through the echo") {
  TrainConfig cfg;
  cfg.base_lr = 3.5e-4;
  cfg.warm_epochs = 7;
  cfg.decay_epochs = 13;
  cfg.adam_beta1 = 0.25;
  cfg.crop_size = 64;
  cfg.seed = 987654321;
  cfg.adv_loss = AdvLossKind::lsgan;
  cfg.flip = false;
  cfg.sample_every = 5;

  TrainConfig back = train_config_from_kv(train_config_to_kv(cfg));
  CHECK(back.base_lr == cfg.base_lr);
  CHECK(back.warm_epochs == cfg.warm_epochs);
  CHECK(back.decay_epochs == cfg.decay_epochs);
  CHECK(back.adam_beta1 == cfg.adam_beta1);
  CHECK(back.adam_beta2 == cfg.adam_beta2);
  CHECK(back.batch_size == cfg.batch_size);
  CHECK(back.crop_size == cfg.crop_size);
  CHECK(back.seed == cfg.seed);
  CHECK(back.adv_loss == cfg.adv_loss);
  CHECK(back.flip == cfg.flip);
  CHECK(back.history_pool == cfg.history_pool);
  CHECK(back.sample_every == cfg.sample_every);
}

TEST_CASE("config: echo preserves doubles exactly") {
  TrainConfig cfg;
  cfg.base_lr = 0.1 + 0.2;  // not representable as a short decimal
  TrainConfig back = train_config_from_kv(train_config_to_kv(cfg));
  CHECK(back.base_lr == cfg.base_lr);
}

TEST_CASE("config: unknown and malformed keys are usage errors") {
  CHECK_THROWS_AS(train_config_from_kv({{"learning_rate", "1e-4"}}),
                  UsageError);
  CHECK_THROWS_AS(train_config_from_kv({{"base_lr", "fast"}}), UsageError);
  CHECK_THROWS_AS(train_config_from_kv({{"warm_epochs", "1.5"}}), UsageError);
  CHECK_THROWS_AS(train_config_from_kv({{"flip", "yes"}}), UsageError);
  CHECK_THROWS_AS(train_config_from_kv({{"seed", "-1"}}), UsageError);
  CHECK_THROWS_AS(synth_config_from_kv({{"n_images", "4"}}), UsageError);
  CHECK_THROWS_AS(synth_config_from_kv({{"background", "plaid"}}),
                  UsageError);
  CHECK_THROWS_AS(synth_config_from_kv({{"shadow_shape", "square"}}),
                  UsageError);
}

TEST_CASE("config: invariant violations are usage errors") {
  CHECK_THROWS_AS(train_config_from_kv({{"base_lr", "0"}}), UsageError);
  CHECK_THROWS_AS(train_config_from_kv({{"batch_size", "2"}}), UsageError);
  CHECK_THROWS_AS(train_config_from_kv({{"crop_size", "30"}}), UsageError);
  CHECK_THROWS_AS(train_config_from_kv({{"crop_size", "20"}}), UsageError);
  CHECK_THROWS_AS(train_config_from_kv({{"history_pool", "50"}}), UsageError);
  CHECK_THROWS_AS(
      train_config_from_kv({{"warm_epochs", "0"}, {"decay_epochs", "0"}}),
      UsageError);
  CHECK_THROWS_AS(train_config_from_kv({{"adam_beta1", "1.0"}}), UsageError);
  CHECK_THROWS_AS(synth_config_from_kv({{"image_size", "10"}}), UsageError);
  CHECK_THROWS_AS(synth_config_from_kv({{"attenuation_min", "0"}}),
                  UsageError);
  CHECK_THROWS_AS(synth_config_from_kv(
                      {{"attenuation_min", "0.7"}, {"attenuation_max", "0.5"}}),
                  UsageError);
  CHECK_THROWS_AS(synth_config_from_kv({{"attenuation_max", "1.0"}}),
                  UsageError);
  CHECK_THROWS_AS(synth_config_from_kv({{"penumbra_width", "-1"}}),
                  UsageError);
}

TEST_CASE("config: loading from a file") {
  TmpDir tmp("config");
  {
    std::ofstream out(tmp.file("train.cfg"));
    out << "# smoke config\n"
           "base_lr = 1e-3\n"
           "warm_epochs = 2\n"
           "decay_epochs = 2\n"
           "crop_size = 32\n"
           "adv_loss = lsgan\n";
  }
  TrainConfig cfg = load_train_config(tmp.file("train.cfg"));
  CHECK(cfg.base_lr == 1e-3);
  CHECK(cfg.total_epochs() == 4);
  CHECK(cfg.crop_size == 32);
  CHECK(cfg.adv_loss == AdvLossKind::lsgan);

  {
    std::ofstream out(tmp.file("synth.cfg"));
    out << "n_shadow = 3\n"
           "n_shadowfree = 2\n"
           "image_size = 32\n"
           "background = checker\n"
           "shadow_shape = soft-blob\n"
           "penumbra_width = 2\n";
  }
  SynthConfig s = load_synth_config(tmp.file("synth.cfg"));
  CHECK(s.n_shadow == 3);
  CHECK(s.n_shadowfree == 2);
  CHECK(s.image_size == 32);
  CHECK(s.background == Background::checker);
  CHECK(s.shadow_shape == ShadowShape::soft_blob);
  CHECK(s.penumbra_width == 2);

  CHECK_THROWS_AS(load_train_config(tmp.file("missing.cfg")), UsageError);
}

TEST_CASE("config: enum names round-trip") {
  for (Background b : {Background::flat_color, Background::gradient,
                       Background::checker, Background::perlin_texture})
    CHECK(background_from_string(to_string(b)) == b);
  for (ShadowShape s :
       {ShadowShape::polygon, ShadowShape::ellipse, ShadowShape::soft_blob})
    CHECK(shadow_shape_from_string(to_string(s)) == s);
}
