#pragma once

#include <string>

#include "tpa/attention.hpp"

namespace tpa {

enum class ModelVariant { PlainLstm, Luong, Tpa };

const char* variant_name(ModelVariant v);
ModelVariant variant_from_name(const std::string& name);

struct ModelConfig {
  ModelVariant variant = ModelVariant::Tpa;
  AttentionMode mode;
  int input_size = 0;    // series count D
  int output_size = 0;   // predicted width, equals D
  int window = 64;       // w
  int hidden = 12;       // m
  int layers = 1;
  int filters = 32;      // k
  int filter_length = 0; // T; 0 means T = w
  bool bias = true;
  int ar_window = 0;     // q; 0 disables the autoregressive component
  bool sigmoid_output = false;  // binary targets: squash outputs to (0,1)

  int effective_filter_length() const { return filter_length > 0 ? filter_length : window; }
  std::string to_json_string() const;
  static ModelConfig from_json_string(const std::string& text);
};

// Per-series linear readout of the last q raw input steps plus a bias.
struct ArParams {
  Tensor weights;  // D x q
  Tensor bias;     // D
};

// y_d = dot(weights[d], last q columns of window row d) + bias[d].
Tensor ar_forecast(const Tensor& window, const ArParams& p);

struct ModelParams {
  ModelConfig config;
  LstmStackParams stack;
  TpaParams attn;  // empty members for variants that do not use them
  ArParams ar;

  void for_each_tensor(const TensorVisitor& visit);
  void for_each_tensor(const ConstTensorVisitor& visit) const;
};

// Deterministic for a given seed: weights uniform in +-1/sqrt(fan_in),
// biases zero except the LSTM forget gates.
ModelParams init_params(const ModelConfig& config, uint64_t seed);

long param_count(const ModelParams& p);

struct ForwardTrace {
  Tensor hidden_history;  // m x w
  Tensor conv_features;   // m x k (empty when no CNN)
  Tensor context;         // mode-dependent (empty for plain LSTM)
  Tensor prediction;      // n_out
};

Tensor model_forward(const ModelParams& p, const Tensor& window);
ForwardTrace model_forward_trace(const ModelParams& p, const Tensor& window);

// Versioned text checkpoint: canonical parameter names mapped to shape and
// row-major values, with the config embedded. Values round-trip bitwise.
void save_checkpoint(const ModelParams& p, const std::string& path);
ModelParams load_checkpoint(const std::string& path);

// One filter per row, for the spectral-analysis pipeline.
void export_filters_csv(const ModelParams& p, const std::string& path);

}  // namespace tpa
