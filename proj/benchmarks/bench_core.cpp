#include <benchmark/benchmark.h>

#include "unshade/colorspace.hpp"
#include "unshade/config.hpp"
#include "unshade/dataset.hpp"
#include "unshade/image.hpp"
#include "unshade/mask.hpp"
#include "unshade/networks.hpp"
#include "unshade/nn/layers.hpp"
#include "unshade/rng.hpp"
#include "unshade/synth.hpp"
#include "unshade/trainer.hpp"

using namespace unshade;

namespace {

Tensor<float> random_input(int c, int h, int w, std::uint64_t seed) {
  Rng rng(seed);
  Tensor<float> x({c, h, w});
  for (std::int64_t i = 0; i < x.size(); ++i)
    x[i] = static_cast<float>(rng.uniform(-1.0, 1.0));
  return x;
}

Image random_image(int h, int w, std::uint64_t seed) {
  Rng rng(seed);
  RawImage raw(h, w);
  for (auto& b : raw.rgb) b = static_cast<std::uint8_t>(rng.uniform_int(256));
  return encode_image(raw);
}

}  // namespace

static void BM_RngNormal(benchmark::State& state) {
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(rng.normal());
}
BENCHMARK(BM_RngNormal);

// Single 3x3 convolution at body-of-generator width, the inner-loop workhorse.
static void BM_Conv2dForward64(benchmark::State& state) {
  nn::Conv2d<float> conv(64, 64, 3, 1, 1, nn::PadMode::reflect);
  Rng rng(2);
  nn::ParamList<float> params;
  conv.collect_params("conv", params);
  nn::init_params(params, rng);
  Tensor<float> x = random_input(64, 64, 64, 3);
  for (auto _ : state) benchmark::DoNotOptimize(conv.forward(x, nullptr));
}
BENCHMARK(BM_Conv2dForward64)->Unit(benchmark::kMillisecond);

static void BM_GeneratorForward(benchmark::State& state) {
  ResnetGenerator<float> g(3, 64, 9);
  Rng rng(4);
  nn::ParamList<float> params = g.params();
  nn::init_params(params, rng);
  Tensor<float> x = random_input(3, 64, 64, 5);
  for (auto _ : state) benchmark::DoNotOptimize(g.forward(x, nullptr));
}
BENCHMARK(BM_GeneratorForward)->Unit(benchmark::kMillisecond);

static void BM_GeneratorForwardBackward(benchmark::State& state) {
  ResnetGenerator<float> g(3, 64, 9);
  Rng rng(6);
  nn::ParamList<float> params = g.params();
  nn::init_params(params, rng);
  Tensor<float> x = random_input(3, 64, 64, 7);
  for (auto _ : state) {
    GenCache<float> cache;
    Tensor<float> y = g.forward(x, &cache);
    nn::zero_grads(params);
    benchmark::DoNotOptimize(g.backward(y, cache, true, true));
  }
}
BENCHMARK(BM_GeneratorForwardBackward)->Unit(benchmark::kMillisecond);

static void BM_DiscriminatorForward(benchmark::State& state) {
  PatchDiscriminator<float> d(3, 64);
  Rng rng(8);
  nn::ParamList<float> params = d.params();
  nn::init_params(params, rng);
  Tensor<float> x = random_input(3, 64, 64, 9);
  for (auto _ : state) benchmark::DoNotOptimize(d.forward(x, nullptr));
}
BENCHMARK(BM_DiscriminatorForward)->Unit(benchmark::kMillisecond);

// One full optimization step at the end-to-end smoke-test size.
static void BM_TrainerStep(benchmark::State& state) {
  SynthConfig cfg;
  cfg.n_shadow = 2;
  cfg.n_shadowfree = 2;
  cfg.image_size = 64;
  cfg.seed = 42;
  UnpairedDataset data;
  for (int i = 0; i < 2; ++i) {
    data.shadow.push_back(synth_shadow_image(cfg, i).shadow);
    data.shadowfree.push_back(synth_free_image(cfg, i));
  }
  TrainConfig tc;
  tc.crop_size = 64;
  tc.seed = 11;
  tc.sample_every = 1 << 30;
  Trainer<float> trainer(tc, std::move(data), "/tmp/unshade_bench_trainer");
  const RawImage& s = synth_shadow_image(cfg, 0).shadow;
  const RawImage& f = synth_free_image(cfg, 0);
  for (auto _ : state)
    benchmark::DoNotOptimize(trainer.step(s, f, 2e-4));
}
BENCHMARK(BM_TrainerStep)->Unit(benchmark::kMillisecond);

static void BM_OtsuThreshold(benchmark::State& state) {
  Rng rng(10);
  OtsuHistogram hist{};
  for (auto& b : hist) b = rng.uniform_int(4000);
  for (auto _ : state) benchmark::DoNotOptimize(otsu_threshold(hist));
}
BENCHMARK(BM_OtsuThreshold);

static void BM_MakeMask256(benchmark::State& state) {
  Image shadow = random_image(256, 256, 11);
  Image shadowfree = random_image(256, 256, 12);
  for (auto _ : state)
    benchmark::DoNotOptimize(make_mask(shadow, shadowfree));
}
BENCHMARK(BM_MakeMask256)->Unit(benchmark::kMillisecond);

static void BM_ToLab256(benchmark::State& state) {
  Image img = random_image(256, 256, 13);
  for (auto _ : state) benchmark::DoNotOptimize(to_lab(img));
}
BENCHMARK(BM_ToLab256)->Unit(benchmark::kMillisecond);

static void BM_RmseLab256(benchmark::State& state) {
  LabImage a = to_lab(random_image(256, 256, 14));
  LabImage b = to_lab(random_image(256, 256, 15));
  for (auto _ : state) benchmark::DoNotOptimize(rmse_lab(a, b));
}
BENCHMARK(BM_RmseLab256);

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  return 0;
}
