#include <benchmark/benchmark.h>

#include "tpa/analysis.hpp"
#include "tpa/experiments.hpp"

using namespace tpa;

namespace {

Tensor random_tensor(Shape shape, uint64_t seed) {
  Rng rng(seed);
  Tensor t = Tensor::zeros(std::move(shape));
  for (int i = 0; i < t.numel(); ++i) t.at(i) = rng.uniform(-1.0, 1.0);
  return t;
}

void BM_Matmul(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Tensor a = random_tensor({n, n}, 1);
  Tensor b = random_tensor({n, n}, 2);
  for (auto _ : state) {
    Tensor c = matmul(a, b);
    benchmark::DoNotOptimize(c.values.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_Matmul)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_Conv1dRows(benchmark::State& state) {
  int w = static_cast<int>(state.range(0));
  Tensor h = random_tensor({32, w}, 3);
  Tensor f = random_tensor({32, w}, 4);
  for (auto _ : state) {
    Tensor c = conv1d_rows(h, f);
    benchmark::DoNotOptimize(c.values.data());
  }
}
BENCHMARK(BM_Conv1dRows)->Arg(24)->Arg(64)->Arg(168);

void BM_LstmCellStep(benchmark::State& state) {
  int m = static_cast<int>(state.range(0));
  Rng rng(5);
  LstmCellParams cell = init_lstm_cell(8, m, true, rng);
  Tensor x = random_tensor({8}, 6);
  LstmState s{Tensor::zeros({m}), Tensor::zeros({m})};
  for (auto _ : state) {
    LstmState next = lstm_cell_step(cell, x, s);
    benchmark::DoNotOptimize(next.h.values.data());
  }
}
BENCHMARK(BM_LstmCellStep)->Arg(12)->Arg(25)->Arg(70);

void BM_TpaForward(benchmark::State& state) {
  ModelConfig cfg;
  cfg.variant = ModelVariant::Tpa;
  cfg.input_size = cfg.output_size = 8;
  cfg.window = static_cast<int>(state.range(0));
  cfg.hidden = 25;
  cfg.layers = 1;
  cfg.filters = 32;
  ModelParams params = init_params(cfg, 7);
  Tensor window = random_tensor({8, cfg.window}, 8);
  for (auto _ : state) {
    Tensor y = model_forward(params, window);
    benchmark::DoNotOptimize(y.values.data());
  }
}
BENCHMARK(BM_TpaForward)->Arg(24)->Arg(64);

void BM_TpaTrainStep(benchmark::State& state) {
  ModelConfig cfg;
  cfg.variant = ModelVariant::Tpa;
  cfg.input_size = cfg.output_size = 8;
  cfg.window = 30;
  cfg.hidden = 12;
  cfg.layers = 1;
  cfg.filters = 32;
  ModelParams params = init_params(cfg, 9);
  Tensor window = random_tensor({8, 30}, 10);
  Tensor target = random_tensor({8}, 11);
  AdamState adam;
  adam_init(adam, params);
  for (auto _ : state) {
    Tape tape;
    ModelParams watched = params;
    std::vector<int> nodes;
    watched.for_each_tensor([&](const std::string&, Tensor& t) {
      t = tape.watch(t);
      nodes.push_back(t.node);
    });
    Tensor loss = l1_loss(model_forward(watched, window), target);
    Gradients grads = tape.backward(loss);
    std::vector<Tensor> flat;
    for (int n : nodes) flat.push_back(grads.at(n));
    adam_step(adam, params, flat, 1e-3);
    benchmark::DoNotOptimize(params.attn.w_v.values.data());
  }
}
BENCHMARK(BM_TpaTrainStep);

void BM_DftMagnitude(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  Rng rng(12);
  std::vector<double> signal(static_cast<size_t>(n));
  for (double& v : signal) v = rng.uniform(-1.0, 1.0);
  for (auto _ : state) {
    Spectrum s = dft_magnitude(signal);
    benchmark::DoNotOptimize(s.magnitudes.data());
  }
  state.SetComplexityN(n);
}
BENCHMARK(BM_DftMagnitude)->RangeMultiplier(2)->Range(16, 256)->Complexity();

}  // namespace

BENCHMARK_MAIN();
