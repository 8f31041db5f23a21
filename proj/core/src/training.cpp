#include "tpa/training.hpp"

#include <algorithm>
#include <chrono>
#include <climits>
#include <cstdlib>
#include <limits>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tpa/metrics.hpp"
#include "tpa/rng.hpp"

namespace tpa {

const char* loss_kind_name(LossKind k) {
  return k == LossKind::L1 ? "l1" : "cross-entropy";
}

LossKind loss_kind_from_name(const std::string& name) {
  if (name == "l1") return LossKind::L1;
  if (name == "cross-entropy" || name == "ce") return LossKind::CrossEntropy;
  throw std::invalid_argument("unknown loss kind: " + name);
}

Tensor l1_loss(const Tensor& pred, const Tensor& target) {
  return mean(abs(sub(pred, target)));
}

Tensor cross_entropy_loss(const Tensor& probabilities, const Tensor& targets) {
  if (!same_shape(probabilities, targets)) {
    throw ShapeError("cross_entropy_loss: shapes differ, " + shape_str(probabilities.shape) +
                     " vs " + shape_str(targets.shape));
  }
  const double floor = 1e-7;
  Tensor p = clamp(probabilities, floor, 1.0 - floor);
  Tensor ones = Tensor::full(targets.shape, 1.0);
  Tensor pos = mul(targets, log(p));
  Tensor neg = mul(sub(ones, targets), log(sub(ones, p)));
  return scale(mean(add(pos, neg)), -1.0);
}

void adam_init(AdamState& state, const ModelParams& params) {
  state.step_count = 0;
  state.first_moment.clear();
  state.second_moment.clear();
  params.for_each_tensor([&](const std::string&, const Tensor& t) {
    state.first_moment.push_back(Tensor::zeros(t.shape));
    state.second_moment.push_back(Tensor::zeros(t.shape));
  });
}

void adam_step(AdamState& state, ModelParams& params, const std::vector<Tensor>& grads, double lr) {
  ++state.step_count;
  double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
  double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
  size_t slot = 0;
  params.for_each_tensor([&](const std::string&, Tensor& t) {
    if (slot >= grads.size()) throw ShapeError("adam_step: gradient list too short");
    const Tensor& g = grads[slot];
    if (!same_shape(g, t)) throw ShapeError("adam_step: gradient shape mismatch");
    Tensor& m = state.first_moment[slot];
    Tensor& v = state.second_moment[slot];
    for (int i = 0; i < t.numel(); ++i) {
      double gi = g.at(i);
      m.at(i) = state.beta1 * m.at(i) + (1.0 - state.beta1) * gi;
      v.at(i) = state.beta2 * v.at(i) + (1.0 - state.beta2) * gi * gi;
      double mhat = m.at(i) / c1;
      double vhat = v.at(i) / c2;
      t.at(i) -= lr * mhat / (std::sqrt(vhat) + state.eps);
    }
    ++slot;
  });
  if (slot != grads.size()) throw ShapeError("adam_step: gradient list too long");
}

double lr_at(long step, double base, int every, double rate) {
  if (every <= 0) return base;
  return base * std::pow(rate, static_cast<double>(step / every));
}

ModelConfig TrainConfig::model_config(int series_width) const {
  ModelConfig m;
  m.variant = variant;
  m.mode = mode;
  m.input_size = series_width;
  m.output_size = series_width;
  m.window = window;
  m.hidden = hidden;
  m.layers = layers;
  m.filters = filters;
  m.filter_length = filter_length;
  m.bias = bias;
  m.ar_window = ar_window;
  m.sigmoid_output = loss == LossKind::CrossEntropy;
  return m;
}

std::string TrainConfig::to_json_string() const {
  nlohmann::json j;
  j["window"] = window;
  j["horizon"] = horizon;
  j["hidden"] = hidden;
  j["layers"] = layers;
  j["filters"] = filters;
  j["filter_length"] = filter_length;
  j["lr"] = lr;
  j["decay_every"] = decay_every;
  j["decay_rate"] = decay_rate;
  j["epochs"] = epochs;
  j["batch"] = batch;
  j["seed"] = seed;
  j["loss"] = loss_kind_name(loss);
  j["normalization"] = norm_mode_name(normalization);
  j["variant"] = variant_name(variant);
  j["axis"] = attend_axis_name(mode.axis);
  j["activation"] = activation_name(mode.activation);
  j["integration"] = integration_name(mode.integration);
  j["ar_window"] = ar_window;
  j["bias"] = bias;
  j["clip_norm"] = clip_norm;
  return j.dump();
}

namespace {

struct WatchedParams {
  ModelParams params;
  std::vector<int> nodes;  // tape node ids in visit order
};

WatchedParams watch_params(Tape& tape, const ModelParams& params) {
  WatchedParams w;
  w.params = params;
  w.params.for_each_tensor([&](const std::string&, Tensor& t) {
    t = tape.watch(t);
    w.nodes.push_back(t.node);
  });
  return w;
}

std::vector<Tensor> collect_grads(const Gradients& grads, const WatchedParams& watched) {
  std::vector<Tensor> out;
  out.reserve(watched.nodes.size());
  for (int node : watched.nodes) out.push_back(grads.at(node));
  return out;
}

void clip_global_norm(std::vector<Tensor>& grads, double max_norm) {
  if (max_norm <= 0.0) return;
  double sq = 0.0;
  for (const Tensor& g : grads) {
    for (int i = 0; i < g.numel(); ++i) sq += g.at(i) * g.at(i);
  }
  double norm = std::sqrt(sq);
  if (norm <= max_norm) return;
  double factor = max_norm / norm;
  for (Tensor& g : grads) {
    for (int i = 0; i < g.numel(); ++i) g.at(i) *= factor;
  }
}

Tensor sample_loss(const ModelParams& params, const WindowSample& sample, LossKind kind) {
  Tensor pred = model_forward(params, sample.input);
  return kind == LossKind::L1 ? l1_loss(pred, sample.target)
                              : cross_entropy_loss(pred, sample.target);
}

}  // namespace

double validation_metric(const ModelParams& params, const std::vector<WindowSample>& samples,
                         ValueKind kind, const NormalizationState& norm) {
  if (samples.empty()) return std::numeric_limits<double>::quiet_NaN();
  int n = params.config.output_size;
  int rows = static_cast<int>(samples.size());
  Tensor pred = Tensor::zeros({rows, n});
  Tensor truth = Tensor::zeros({rows, n});
  for (int r = 0; r < rows; ++r) {
    Tensor y = model_forward(params, samples[static_cast<size_t>(r)].input);
    for (int d = 0; d < n; ++d) {
      pred.at(r, d) = denormalize_value(norm, d, y.at(d));
      truth.at(r, d) = denormalize_value(norm, d, samples[static_cast<size_t>(r)].target.at(d));
    }
  }
  return kind == ValueKind::Continuous ? rse(pred, truth)
                                       : cross_entropy_loss(pred, truth).item();
}

TrainResult train(const TrainConfig& config, const ModelConfig& model_config, const TrainData& data) {
  if (data.train.empty()) throw DataError("train: no training samples");
  if (model_config.input_size != data.train.front().input.rows()) {
    throw ShapeError("train: config width does not match dataset width");
  }

  ModelParams params = init_params(model_config, config.seed);
  AdamState adam;
  adam_init(adam, params);

  TrainResult result;
  result.best = params;
  long global_step = 0;

  std::vector<int> order(data.train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    auto t0 = std::chrono::steady_clock::now();
    Rng shuffle_rng(Rng::mix(config.seed, static_cast<uint64_t>(epoch)));
    shuffle_rng.shuffle(order);

    double epoch_loss_sum = 0.0;
    for (size_t begin = 0; begin < order.size(); begin += static_cast<size_t>(config.batch)) {
      size_t end = std::min(order.size(), begin + static_cast<size_t>(config.batch));
      Tape tape;
      WatchedParams watched = watch_params(tape, params);

      Tensor batch_loss;
      for (size_t s = begin; s < end; ++s) {
        Tensor l = sample_loss(watched.params, data.train[static_cast<size_t>(order[s])], config.loss);
        batch_loss = batch_loss.empty() ? l : add(batch_loss, l);
      }
      batch_loss = scale(batch_loss, 1.0 / static_cast<double>(end - begin));
      double loss_value = batch_loss.item();
      if (!std::isfinite(loss_value)) throw DivergenceError(global_step);
      epoch_loss_sum += loss_value * static_cast<double>(end - begin);

      std::vector<Tensor> grads = collect_grads(tape.backward(batch_loss), watched);
      clip_global_norm(grads, config.clip_norm);
      adam_step(adam, params, grads, lr_at(global_step, config.lr, config.decay_every, config.decay_rate));
      ++global_step;
    }

    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = epoch_loss_sum / static_cast<double>(order.size());
    stats.val_loss = validation_metric(params, data.val, data.kind, data.norm);
    stats.lr = lr_at(global_step - 1, config.lr, config.decay_every, config.decay_rate);
    auto t1 = std::chrono::steady_clock::now();
    stats.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    result.history.push_back(stats);

    if (!data.val.empty() &&
        (result.best_epoch < 0 || stats.val_loss < result.best_val)) {
      result.best_epoch = epoch;
      result.best_val = stats.val_loss;
      result.best = params;
    }
  }

  result.last = params;
  if (data.val.empty()) {
    result.best = result.last;
    result.best_epoch = -1;
    result.best_val = result.history.empty() ? 0.0 : result.history.back().train_loss;
  }
  return result;
}

std::string history_canonical_json(const std::vector<EpochStats>& history) {
  nlohmann::json rows = nlohmann::json::array();
  char buf[40];
  auto num = [&](double v) -> std::string {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  };
  for (const EpochStats& e : history) {
    nlohmann::json row;
    row["epoch"] = e.epoch;
    row["train_loss"] = num(e.train_loss);
    row["val_loss"] = std::isnan(e.val_loss) ? "null" : num(e.val_loss);
    row["lr"] = num(e.lr);
    rows.push_back(row);
  }
  return rows.dump();
}

GridResult grid_search(const std::vector<TrainConfig>& space, const SplitResult& split) {
  if (space.empty()) throw DataError("grid_search: empty search space");
  GridResult result;
  for (const TrainConfig& config : space) {
    auto [train_ds, norm] = normalize(split.train, config.normalization);
    TimeSeriesDataset val_ds = apply_normalization(split.val, norm);
    TrainData data;
    data.train = make_windows(train_ds, config.window, config.horizon);
    data.val = make_windows(val_ds, config.window, config.horizon);
    data.kind = split.train.kind;
    data.norm = norm;
    ModelConfig mc = config.model_config(split.train.width);
    TrainResult tr = train(config, mc, data);
    GridEntry entry;
    entry.config = config;
    entry.best_val = tr.best_val;
    entry.best_epoch = tr.best_epoch;
    result.entries.push_back(std::move(entry));
    if (result.best_index < 0 ||
        result.entries.back().best_val < result.entries[static_cast<size_t>(result.best_index)].best_val) {
      result.best_index = static_cast<int>(result.entries.size()) - 1;
    }
  }
  return result;
}

ModelConfig match_param_budget(long target_count, const ModelConfig& base) {
  if (target_count <= 0) throw std::invalid_argument("match_param_budget: target must be positive");
  const long lo = static_cast<long>(std::ceil(0.95 * static_cast<double>(target_count)));
  const long hi = static_cast<long>(std::floor(1.05 * static_cast<double>(target_count)));

  auto count_for = [&](int hidden) {
    ModelConfig c = base;
    c.hidden = hidden;
    return param_count(init_params(c, 0));
  };

  int best_in_band = -1;
  int nearest = 1;
  long nearest_gap = -1;
  for (int m = 1; m <= 4096; ++m) {
    long count = count_for(m);
    if (count >= lo && count <= hi) best_in_band = m;
    long gap = std::labs(count - target_count);
    if (nearest_gap < 0 || gap < nearest_gap) {
      nearest = m;
      nearest_gap = gap;
    }
    if (count > hi) break;  // counts grow monotonically in hidden size
  }
  ModelConfig out = base;
  out.hidden = best_in_band > 0 ? best_in_band : nearest;
  return out;
}

}  // namespace tpa
