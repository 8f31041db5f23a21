#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tpa/data.hpp"
#include "tpa/model.hpp"

namespace tpa {

// Training produced a non-finite loss.
struct DivergenceError : NumericError {
  explicit DivergenceError(long at_step)
      : NumericError("training diverged: non-finite loss at step " + std::to_string(at_step)),
        step(at_step) {}
  long step;
};

enum class LossKind { L1, CrossEntropy };

const char* loss_kind_name(LossKind k);
LossKind loss_kind_from_name(const std::string& name);

Tensor l1_loss(const Tensor& pred, const Tensor& target);

// Mean over cells of -[t log p + (1-t) log(1-p)], with probabilities
// clamped to [1e-7, 1-1e-7].
Tensor cross_entropy_loss(const Tensor& probabilities, const Tensor& targets);

// Bias-corrected Adam over a flat list of tensors.
struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  long step_count = 0;
  std::vector<Tensor> first_moment;
  std::vector<Tensor> second_moment;
};

void adam_init(AdamState& state, const ModelParams& params);
void adam_step(AdamState& state, ModelParams& params, const std::vector<Tensor>& grads, double lr);

// base * rate^floor(step/every); every <= 0 disables decay.
double lr_at(long step, double base, int every, double rate);

struct TrainConfig {
  int window = 64;
  int horizon = 1;
  int hidden = 12;
  int layers = 1;
  int filters = 32;
  int filter_length = 0;
  double lr = 1e-3;
  int decay_every = 0;
  double decay_rate = 0.995;
  int epochs = 200;
  int batch = 64;
  uint64_t seed = 42;
  LossKind loss = LossKind::L1;
  NormMode normalization = NormMode::None;
  ModelVariant variant = ModelVariant::Tpa;
  AttentionMode mode;
  int ar_window = 0;
  bool bias = true;
  double clip_norm = 5.0;

  ModelConfig model_config(int series_width) const;
  std::string to_json_string() const;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0.0;
  // Selection metric on the validation split (RSE for continuous targets,
  // NLL for binary); NaN when there is no validation data.
  double val_loss = 0.0;
  double lr = 0.0;
  double wall_ms = 0.0;
};

struct TrainData {
  std::vector<WindowSample> train;
  std::vector<WindowSample> val;
  ValueKind kind = ValueKind::Continuous;
  NormalizationState norm;  // used to score validation on the raw scale
};

struct TrainResult {
  ModelParams best;
  ModelParams last;
  std::vector<EpochStats> history;
  int best_epoch = -1;          // -1 when no validation data (best == last)
  double best_val = 0.0;
};

// Shuffled seeded mini-batches, Adam with exponential learning-rate decay,
// global-norm gradient clipping, per-epoch validation and best-checkpoint
// retention. Deterministic for a fixed config.
TrainResult train(const TrainConfig& config, const ModelConfig& model_config, const TrainData& data);

// The deterministic portion of the history (wall-clock timing excluded),
// used for reproducibility comparisons.
std::string history_canonical_json(const std::vector<EpochStats>& history);

// Selection metric of a parameter set over a window list (raw scale).
double validation_metric(const ModelParams& params, const std::vector<WindowSample>& samples,
                         ValueKind kind, const NormalizationState& norm);

struct GridEntry {
  TrainConfig config;
  double best_val = 0.0;
  int best_epoch = -1;
};

struct GridResult {
  int best_index = -1;
  std::vector<GridEntry> entries;
};

// Trains every config on the same raw splits; minimum validation metric
// wins, ties broken by list order. Window sizes and normalization modes may
// differ per config, so windows and scale factors are rebuilt per entry;
// factors always come from the train split.
GridResult grid_search(const std::vector<TrainConfig>& space, const SplitResult& split);

// Largest hidden size whose parameter count is within +-5% of the target;
// falls back to the closest achievable count.
ModelConfig match_param_budget(long target_count, const ModelConfig& base);

}  // namespace tpa
