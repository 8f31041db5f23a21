#include "tpa/experiments.hpp"

namespace tpa {

const char* toy_variant_name(ToyVariant v) {
  switch (v) {
    case ToyVariant::Lstm: return "lstm";
    case ToyVariant::Luong: return "luong";
    case ToyVariant::Tpa: return "tpa";
    case ToyVariant::TpaNoCnn: return "tpa-no-cnn";
  }
  return "?";
}

ToyVariant toy_variant_from_name(const std::string& name) {
  if (name == "lstm") return ToyVariant::Lstm;
  if (name == "luong") return ToyVariant::Luong;
  if (name == "tpa") return ToyVariant::Tpa;
  if (name == "tpa-no-cnn") return ToyVariant::TpaNoCnn;
  throw std::invalid_argument("unknown toy variant: " + name);
}

namespace {

ModelConfig toy_reference_config(int d, int window, int filters, int filter_length, int layers,
                                 int base_hidden) {
  ModelConfig cfg;
  cfg.variant = ModelVariant::Tpa;
  cfg.mode = {AttendAxis::Position, Activation::Sigmoid, Integration::Scored};
  cfg.input_size = cfg.output_size = d;
  cfg.window = window;
  cfg.hidden = base_hidden;
  cfg.layers = layers;
  cfg.filters = filters;
  cfg.filter_length = filter_length;
  return cfg;
}

ModelConfig toy_variant_config(const ToyRunSpec& spec, long target) {
  ModelConfig cfg = toy_reference_config(spec.d, spec.window, spec.filters, spec.filter_length,
                                         spec.layers, spec.base_hidden);
  switch (spec.variant) {
    case ToyVariant::Tpa:
      break;
    case ToyVariant::TpaNoCnn:
      cfg.mode.axis = AttendAxis::WithoutCnn;
      break;
    case ToyVariant::Lstm:
      cfg.variant = ModelVariant::PlainLstm;
      break;
    case ToyVariant::Luong:
      cfg.variant = ModelVariant::Luong;
      break;
  }
  return match_param_budget(target, cfg);
}

}  // namespace

long toy_param_target(int d, int window, int filters, int filter_length, int layers,
                      int base_hidden) {
  return param_count(
      init_params(toy_reference_config(d, window, filters, filter_length, layers, base_hidden), 0));
}

ToyRunResult run_toy(const ToyRunSpec& spec) {
  long target = toy_param_target(spec.d, spec.window, spec.filters, spec.filter_length,
                                 spec.layers, spec.base_hidden);
  ModelConfig mc = toy_variant_config(spec, target);

  // One full period of shifted samples: the generator is 64-periodic, so a
  // window-plus-64 base sequence yields exactly 64 windows.
  TimeSeriesDataset toy = toy_series(spec.d, spec.family, spec.window + 64);

  TrainConfig tc;
  tc.window = spec.window;
  tc.horizon = spec.horizon;
  tc.hidden = mc.hidden;
  tc.layers = mc.layers;
  tc.filters = spec.filters;
  tc.filter_length = spec.filter_length;
  tc.lr = spec.lr;
  tc.decay_every = spec.decay_every;
  tc.decay_rate = spec.decay_rate;
  tc.epochs = spec.epochs;
  tc.batch = spec.batch;
  tc.seed = spec.seed;
  tc.loss = LossKind::L1;
  tc.variant = mc.variant;
  tc.mode = mc.mode;

  TrainData data;
  data.train = make_windows(toy, spec.window, spec.horizon);
  data.kind = ValueKind::Continuous;

  TrainResult tr = train(tc, mc, data);

  ToyRunResult result;
  result.spec = spec;
  result.hidden = mc.hidden;
  result.params = param_count(tr.last);
  result.train_mae = tr.history.back().train_loss;
  result.history = std::move(tr.history);
  return result;
}

EvalOutput evaluate_model(const ModelParams& params, const std::vector<WindowSample>& samples,
                          const NormalizationState& norm, ValueKind kind) {
  if (samples.empty()) throw DataError("evaluate_model: no samples");
  int n = params.config.output_size;
  int rows = static_cast<int>(samples.size());
  EvalOutput out;
  out.predictions = Tensor::zeros({rows, n});
  out.truths = Tensor::zeros({rows, n});
  out.origins.reserve(samples.size());
  for (int r = 0; r < rows; ++r) {
    const WindowSample& s = samples[static_cast<size_t>(r)];
    Tensor y = model_forward(params, s.input);
    for (int d = 0; d < n; ++d) {
      out.predictions.at(r, d) = denormalize_value(norm, d, y.at(d));
      out.truths.at(r, d) = denormalize_value(norm, d, s.target.at(d));
    }
    out.origins.push_back(s.origin);
  }
  out.report = kind == ValueKind::Continuous
                   ? continuous_report(out.predictions, out.truths)
                   : binary_report(out.predictions, out.truths);
  return out;
}

EvalOutput naive_persistence(const std::vector<WindowSample>& samples,
                             const NormalizationState& norm, ValueKind kind) {
  if (samples.empty()) throw DataError("naive_persistence: no samples");
  int n = samples.front().input.rows();
  int w = samples.front().input.cols();
  int rows = static_cast<int>(samples.size());
  EvalOutput out;
  out.predictions = Tensor::zeros({rows, n});
  out.truths = Tensor::zeros({rows, n});
  out.origins.reserve(samples.size());
  for (int r = 0; r < rows; ++r) {
    const WindowSample& s = samples[static_cast<size_t>(r)];
    for (int d = 0; d < n; ++d) {
      out.predictions.at(r, d) = denormalize_value(norm, d, s.input.at(d, w - 1));
      out.truths.at(r, d) = denormalize_value(norm, d, s.target.at(d));
    }
    out.origins.push_back(s.origin);
  }
  out.report = kind == ValueKind::Continuous
                   ? continuous_report(out.predictions, out.truths)
                   : binary_report(out.predictions, out.truths);
  return out;
}

}  // namespace tpa
