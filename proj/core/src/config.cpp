#include "unshade/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "unshade/errors.hpp"

namespace unshade {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const char* expected) {
  throw UsageError("config key '" + key + "': cannot parse '" + value +
                   "' as " + expected);
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) bad_value(key, value, "a number");
    return v;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, value, "a number");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    long long v = std::stoll(value, &used);
    if (used != value.size()) bad_value(key, value, "an integer");
    return v;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, value, "an integer");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(value, &used);
    if (used != value.size() || value[0] == '-')
      bad_value(key, value, "a non-negative integer");
    return v;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, value, "a non-negative integer");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value, "a boolean (true/false)");
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void TrainConfig::validate() const {
  check_usage(base_lr > 0, "base_lr must be positive");
  check_usage(warm_epochs >= 0 && decay_epochs >= 0,
              "epoch counts must be non-negative");
  check_usage(warm_epochs + decay_epochs >= 1, "schedule needs >= 1 epoch");
  check_usage(adam_beta1 >= 0 && adam_beta1 < 1 && adam_beta2 >= 0 &&
                  adam_beta2 < 1,
              "adam betas must lie in [0,1)");
  check_usage(batch_size == 1, "only batch_size=1 is supported");
  check_usage(crop_size >= 24 && crop_size % 4 == 0,
              "crop_size must be >= 24 and divisible by 4");
  check_usage(history_pool == 0, "only history_pool=0 is supported");
  check_usage(sample_every >= 1, "sample_every must be >= 1");
}

Background background_from_string(const std::string& s) {
  if (s == "flat-color") return Background::flat_color;
  if (s == "gradient") return Background::gradient;
  if (s == "checker") return Background::checker;
  if (s == "perlin-texture") return Background::perlin_texture;
  throw UsageError("unknown background '" + s +
                   "' (expected flat-color, gradient, checker, or "
                   "perlin-texture)");
}

ShadowShape shadow_shape_from_string(const std::string& s) {
  if (s == "polygon") return ShadowShape::polygon;
  if (s == "ellipse") return ShadowShape::ellipse;
  if (s == "soft-blob") return ShadowShape::soft_blob;
  throw UsageError("unknown shadow_shape '" + s +
                   "' (expected polygon, ellipse, or soft-blob)");
}

const char* to_string(Background b) {
  switch (b) {
    case Background::flat_color: return "flat-color";
    case Background::gradient: return "gradient";
    case Background::checker: return "checker";
    case Background::perlin_texture: return "perlin-texture";
  }
  return "?";
}

const char* to_string(ShadowShape s) {
  switch (s) {
    case ShadowShape::polygon: return "polygon";
    case ShadowShape::ellipse: return "ellipse";
    case ShadowShape::soft_blob: return "soft-blob";
  }
  return "?";
}

void SynthConfig::validate() const {
  check_usage(n_shadow >= 1 && n_shadowfree >= 1,
              "image counts must be >= 1");
  check_usage(image_size >= 8 && image_size % 4 == 0,
              "image_size must be >= 8 and divisible by 4");
  check_usage(attenuation_min > 0 && attenuation_min <= attenuation_max &&
                  attenuation_max < 1,
              "attenuation range must satisfy 0 < min <= max < 1");
  check_usage(penumbra_width >= 0, "penumbra_width must be >= 0");
}

KeyValues parse_key_values(const std::string& text,
                           const std::string& origin) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw UsageError(origin + ":" + std::to_string(lineno) +
                       ": expected key=value, got '" + t + "'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw UsageError(origin + ":" + std::to_string(lineno) + ": empty key");
    for (const auto& [k, v] : kv)
      if (k == key)
        throw UsageError(origin + ":" + std::to_string(lineno) +
                         ": duplicate key '" + key + "'");
    kv.emplace_back(std::move(key), std::move(value));
  }
  return kv;
}

KeyValues load_key_values(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_key_values(buf.str(), path);
}

TrainConfig train_config_from_kv(const KeyValues& kv) {
  TrainConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key == "base_lr") cfg.base_lr = parse_double(key, value);
    else if (key == "warm_epochs")
      cfg.warm_epochs = static_cast<int>(parse_int(key, value));
    else if (key == "decay_epochs")
      cfg.decay_epochs = static_cast<int>(parse_int(key, value));
    else if (key == "adam_beta1") cfg.adam_beta1 = parse_double(key, value);
    else if (key == "adam_beta2") cfg.adam_beta2 = parse_double(key, value);
    else if (key == "batch_size")
      cfg.batch_size = static_cast<int>(parse_int(key, value));
    else if (key == "crop_size")
      cfg.crop_size = static_cast<int>(parse_int(key, value));
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else if (key == "adv_loss") cfg.adv_loss = adv_loss_from_string(value);
    else if (key == "flip") cfg.flip = parse_bool(key, value);
    else if (key == "history_pool")
      cfg.history_pool = static_cast<int>(parse_int(key, value));
    else if (key == "sample_every")
      cfg.sample_every = static_cast<int>(parse_int(key, value));
    else
      throw UsageError("unknown training config key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

SynthConfig synth_config_from_kv(const KeyValues& kv) {
  SynthConfig cfg;
  for (const auto& [key, value] : kv) {
    if (key == "n_shadow")
      cfg.n_shadow = static_cast<int>(parse_int(key, value));
    else if (key == "n_shadowfree")
      cfg.n_shadowfree = static_cast<int>(parse_int(key, value));
    else if (key == "image_size")
      cfg.image_size = static_cast<int>(parse_int(key, value));
    else if (key == "background")
      cfg.background = background_from_string(value);
    else if (key == "shadow_shape")
      cfg.shadow_shape = shadow_shape_from_string(value);
    else if (key == "attenuation_min")
      cfg.attenuation_min = parse_double(key, value);
    else if (key == "attenuation_max")
      cfg.attenuation_max = parse_double(key, value);
    else if (key == "penumbra_width")
      cfg.penumbra_width = static_cast<int>(parse_int(key, value));
    else if (key == "seed") cfg.seed = parse_u64(key, value);
    else
      throw UsageError("unknown synth config key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

TrainConfig load_train_config(const std::string& path) {
  return train_config_from_kv(load_key_values(path));
}

SynthConfig load_synth_config(const std::string& path) {
  return synth_config_from_kv(load_key_values(path));
}

KeyValues train_config_to_kv(const TrainConfig& cfg) {
  KeyValues kv;
  kv.emplace_back("base_lr", format_double(cfg.base_lr));
  kv.emplace_back("warm_epochs", std::to_string(cfg.warm_epochs));
  kv.emplace_back("decay_epochs", std::to_string(cfg.decay_epochs));
  kv.emplace_back("adam_beta1", format_double(cfg.adam_beta1));
  kv.emplace_back("adam_beta2", format_double(cfg.adam_beta2));
  kv.emplace_back("batch_size", std::to_string(cfg.batch_size));
  kv.emplace_back("crop_size", std::to_string(cfg.crop_size));
  kv.emplace_back("seed", std::to_string(cfg.seed));
  kv.emplace_back("adv_loss", to_string(cfg.adv_loss));
  kv.emplace_back("flip", cfg.flip ? "true" : "false");
  kv.emplace_back("history_pool", std::to_string(cfg.history_pool));
  kv.emplace_back("sample_every", std::to_string(cfg.sample_every));
  return kv;
}

}  // namespace unshade
