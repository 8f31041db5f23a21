#pragma once

#include "tpa/metrics.hpp"
#include "tpa/training.hpp"

namespace tpa {

// Model variants compared on the sine-wave toys.
enum class ToyVariant { Lstm, Luong, Tpa, TpaNoCnn };

const char* toy_variant_name(ToyVariant v);
ToyVariant toy_variant_from_name(const std::string& name);

struct ToyRunSpec {
  ToyFamily family = ToyFamily::Independent;
  int d = 1;
  ToyVariant variant = ToyVariant::Tpa;
  int epochs = 200;
  uint64_t seed = 1;
  int window = 64;
  int horizon = 1;
  int batch = 8;
  double lr = 3e-3;
  int decay_every = 0;      // steps between lr decays, 0 disables
  double decay_rate = 0.995;
  int filters = 32;
  int filter_length = 0;  // 0 means T = w
  int layers = 1;
  int base_hidden = 12;   // hidden size of the reference model that sets the budget
};

struct ToyRunResult {
  ToyRunSpec spec;
  int hidden = 0;     // parity-matched hidden size
  long params = 0;
  double train_mae = 0.0;  // final-epoch training loss
  std::vector<EpochStats> history;
};

// Parameter budget of the reference full-attention model for one toy width.
long toy_param_target(int d, int window, int filters, int filter_length, int layers,
                      int base_hidden);

// One toy training run: the dataset is one full period of shifted windows,
// every variant is parameter-matched to the reference budget, and training
// fits without a validation split.
ToyRunResult run_toy(const ToyRunSpec& spec);

struct EvalOutput {
  MetricsReport report;
  Tensor predictions;  // rows = samples, raw scale
  Tensor truths;
  std::vector<int> origins;  // source-row index of each prediction
};

// Scores a trained model over a window list on the raw (denormalized) scale.
EvalOutput evaluate_model(const ModelParams& params, const std::vector<WindowSample>& samples,
                          const NormalizationState& norm, ValueKind kind);

// Baseline that repeats the last observed value of each window.
EvalOutput naive_persistence(const std::vector<WindowSample>& samples,
                             const NormalizationState& norm, ValueKind kind);

}  // namespace tpa
