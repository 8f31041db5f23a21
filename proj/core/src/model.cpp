#include "tpa/model.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tpa {

const char* variant_name(ModelVariant v) {
  switch (v) {
    case ModelVariant::PlainLstm: return "lstm";
    case ModelVariant::Luong: return "luong";
    case ModelVariant::Tpa: return "tpa";
  }
  return "?";
}

ModelVariant variant_from_name(const std::string& name) {
  if (name == "lstm") return ModelVariant::PlainLstm;
  if (name == "luong") return ModelVariant::Luong;
  if (name == "tpa") return ModelVariant::Tpa;
  throw std::invalid_argument("unknown model variant: " + name);
}

namespace {

AttendAxis axis_from_name(const std::string& name) {
  if (name == "position") return AttendAxis::Position;
  if (name == "filter") return AttendAxis::Filter;
  if (name == "without-cnn") return AttendAxis::WithoutCnn;
  throw std::invalid_argument("unknown attend axis: " + name);
}

Activation activation_from_name(const std::string& name) {
  if (name == "sigmoid") return Activation::Sigmoid;
  if (name == "softmax") return Activation::Softmax;
  throw std::invalid_argument("unknown activation: " + name);
}

Integration integration_from_name(const std::string& name) {
  if (name == "scored") return Integration::Scored;
  if (name == "concat") return Integration::Concat;
  throw std::invalid_argument("unknown integration: " + name);
}

}  // namespace

std::string ModelConfig::to_json_string() const {
  nlohmann::json j;
  j["variant"] = variant_name(variant);
  j["axis"] = attend_axis_name(mode.axis);
  j["activation"] = activation_name(mode.activation);
  j["integration"] = integration_name(mode.integration);
  j["input_size"] = input_size;
  j["output_size"] = output_size;
  j["window"] = window;
  j["hidden"] = hidden;
  j["layers"] = layers;
  j["filters"] = filters;
  j["filter_length"] = filter_length;
  j["bias"] = bias;
  j["ar_window"] = ar_window;
  j["sigmoid_output"] = sigmoid_output;
  return j.dump();
}

ModelConfig ModelConfig::from_json_string(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ModelConfig c;
  c.variant = variant_from_name(j.at("variant").get<std::string>());
  c.mode.axis = axis_from_name(j.at("axis").get<std::string>());
  c.mode.activation = activation_from_name(j.at("activation").get<std::string>());
  c.mode.integration = integration_from_name(j.at("integration").get<std::string>());
  c.input_size = j.at("input_size").get<int>();
  c.output_size = j.at("output_size").get<int>();
  c.window = j.at("window").get<int>();
  c.hidden = j.at("hidden").get<int>();
  c.layers = j.at("layers").get<int>();
  c.filters = j.at("filters").get<int>();
  c.filter_length = j.at("filter_length").get<int>();
  c.bias = j.at("bias").get<bool>();
  c.ar_window = j.at("ar_window").get<int>();
  c.sigmoid_output = j.at("sigmoid_output").get<bool>();
  return c;
}

Tensor ar_forecast(const Tensor& window, const ArParams& p) {
  int q = p.weights.cols();
  int w = window.cols();
  if (q > w) {
    throw ShapeError("ar_forecast: ar window " + std::to_string(q) + " exceeds input window " +
                     std::to_string(w));
  }
  if (p.weights.rows() != window.rows()) {
    throw ShapeError("ar_forecast: weights rows do not match series count");
  }
  Tensor recent = slice_cols(window, w - q, w);
  return add(sum_rows(mul(recent, p.weights)), p.bias);
}

void ModelParams::for_each_tensor(const TensorVisitor& visit) {
  stack.for_each_tensor(visit);
  if (!attn.filters.empty()) visit("attn/filters", attn.filters);
  if (!attn.w_a.empty()) visit("attn/W_a", attn.w_a);
  if (!attn.w_h.empty()) visit("attn/W_h", attn.w_h);
  if (!attn.w_v.empty()) visit("attn/W_v", attn.w_v);
  if (!attn.w_hprime.empty()) visit("head/W_hprime", attn.w_hprime);
  if (!ar.weights.empty()) {
    visit("ar/weights", ar.weights);
    visit("ar/bias", ar.bias);
  }
}

void ModelParams::for_each_tensor(const ConstTensorVisitor& visit) const {
  const_cast<ModelParams*>(this)->for_each_tensor(
      [&](const std::string& name, Tensor& t) { visit(name, t); });
}

namespace {

Tensor uniform_matrix(Shape shape, Rng& rng) {
  int fan_in = shape.back();
  double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  Tensor t = Tensor::zeros(std::move(shape));
  for (int i = 0; i < t.numel(); ++i) t.at(i) = rng.uniform(-bound, bound);
  return t;
}

}  // namespace

ModelParams init_params(const ModelConfig& config, uint64_t seed) {
  if (config.input_size <= 0 || config.output_size <= 0 || config.window <= 0 ||
      config.hidden <= 0 || config.layers <= 0) {
    throw ShapeError("init_params: config dimensions must be positive");
  }
  Rng rng(seed);
  ModelParams p;
  p.config = config;
  p.stack = init_lstm_stack(config.input_size, config.hidden, config.layers, config.bias, rng);

  int m = config.hidden;
  int w = config.window;
  int k = config.filters;
  int t = config.effective_filter_length();
  int n_out = config.output_size;

  switch (config.variant) {
    case ModelVariant::PlainLstm:
      p.attn.w_hprime = uniform_matrix({n_out, m}, rng);
      break;
    case ModelVariant::Luong:
      p.attn.w_a = uniform_matrix({m, m}, rng);
      p.attn.w_h = uniform_matrix({m, m}, rng);
      p.attn.w_v = uniform_matrix({m, m}, rng);
      p.attn.w_hprime = uniform_matrix({n_out, m}, rng);
      break;
    case ModelVariant::Tpa: {
      p.attn.mode = config.mode;
      if (config.mode.integration == Integration::Concat) {
        p.attn.w_h = uniform_matrix({m, m}, rng);
        p.attn.w_v = uniform_matrix({m, m * w}, rng);
      } else {
        switch (config.mode.axis) {
          case AttendAxis::Position:
            p.attn.filters = uniform_matrix({k, t}, rng);
            p.attn.w_a = uniform_matrix({k, m}, rng);
            p.attn.w_h = uniform_matrix({m, m}, rng);
            p.attn.w_v = uniform_matrix({m, k}, rng);
            break;
          case AttendAxis::Filter:
            p.attn.filters = uniform_matrix({k, t}, rng);
            p.attn.w_a = uniform_matrix({m, m}, rng);
            p.attn.w_h = uniform_matrix({m, m}, rng);
            p.attn.w_v = uniform_matrix({m, m}, rng);
            break;
          case AttendAxis::WithoutCnn:
            p.attn.w_a = uniform_matrix({w, m}, rng);
            p.attn.w_h = uniform_matrix({m, m}, rng);
            p.attn.w_v = uniform_matrix({m, w}, rng);
            break;
        }
      }
      p.attn.w_hprime = uniform_matrix({n_out, m}, rng);
      break;
    }
  }

  if (config.ar_window > 0) {
    p.ar.weights = uniform_matrix({config.input_size, config.ar_window}, rng);
    p.ar.bias = Tensor::zeros({config.input_size});
  }
  return p;
}

long param_count(const ModelParams& p) {
  long n = 0;
  p.for_each_tensor([&](const std::string&, const Tensor& t) { n += t.numel(); });
  return n;
}

ForwardTrace model_forward_trace(const ModelParams& p, const Tensor& window) {
  const ModelConfig& cfg = p.config;
  if (window.rank() != 2 || window.rows() != cfg.input_size || window.cols() != cfg.window) {
    throw ShapeError("model_forward: window shape " + shape_str(window.shape) + " does not match config (" +
                     std::to_string(cfg.input_size) + "," + std::to_string(cfg.window) + ")");
  }

  ForwardTrace trace;
  StackTrace rnn = lstm_stack_forward(p.stack, window);
  trace.hidden_history = rnn.hidden_history;
  const Tensor& h_t = rnn.h_last();

  Tensor y;
  switch (cfg.variant) {
    case ModelVariant::PlainLstm:
      y = linear(p.attn.w_hprime, h_t);
      break;
    case ModelVariant::Luong: {
      trace.context = luong_attention(trace.hidden_history, h_t, p.attn.w_a);
      TpaParams head = p.attn;
      y = tpa_output(h_t, trace.context, head);
      break;
    }
    case ModelVariant::Tpa: {
      bool uses_cnn = cfg.mode.integration == Integration::Scored &&
                      cfg.mode.axis != AttendAxis::WithoutCnn;
      if (uses_cnn) trace.conv_features = temporal_conv(trace.hidden_history, p.attn.filters);
      trace.context = ablation_attend(trace.hidden_history, trace.conv_features, h_t, cfg.mode, p.attn);
      y = tpa_output(h_t, trace.context, p.attn);
      break;
    }
  }

  if (cfg.ar_window > 0) y = add(y, ar_forecast(window, p.ar));
  if (cfg.sigmoid_output) y = sigmoid(y);
  trace.prediction = y;
  return trace;
}

Tensor model_forward(const ModelParams& p, const Tensor& window) {
  return model_forward_trace(p, window).prediction;
}

// ---------------------------------------------------------------------------
// Checkpoint format v1:
//   tpa-checkpoint v1
//   config <one-line JSON>
//   tensor <name> <rank> <extents...>
//   <values, space separated, %.17g>
//   ...
//   end

void save_checkpoint(const ModelParams& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_checkpoint: cannot open " + path);
  out << "tpa-checkpoint v1\n";
  out << "config " << p.config.to_json_string() << "\n";
  char buf[40];
  p.for_each_tensor([&](const std::string& name, const Tensor& t) {
    out << "tensor " << name << " " << t.rank();
    for (int d : t.shape) out << " " << d;
    out << "\n";
    for (int i = 0; i < t.numel(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", t.at(i));
      out << (i ? " " : "") << buf;
    }
    out << "\n";
  });
  out << "end\n";
  if (!out) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

ModelParams load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "tpa-checkpoint v1") {
    throw std::runtime_error("load_checkpoint: unsupported header in " + path);
  }
  if (!std::getline(in, line) || line.rfind("config ", 0) != 0) {
    throw std::runtime_error("load_checkpoint: missing config line in " + path);
  }
  ModelConfig config = ModelConfig::from_json_string(line.substr(7));

  // Rebuild the skeleton so shapes and tensor presence match the config,
  // then overwrite every tensor from the file.
  ModelParams p = init_params(config, 0);
  std::vector<std::pair<std::string, Tensor*>> slots;
  p.for_each_tensor([&](const std::string& name, Tensor& t) { slots.emplace_back(name, &t); });

  size_t next = 0;
  while (std::getline(in, line)) {
    if (line == "end") break;
    std::istringstream head(line);
    std::string tag, name;
    int rank = 0;
    head >> tag >> name >> rank;
    if (tag != "tensor" || head.fail()) {
      throw std::runtime_error("load_checkpoint: malformed tensor header: " + line);
    }
    Shape shape(static_cast<size_t>(rank));
    for (int i = 0; i < rank; ++i) head >> shape[static_cast<size_t>(i)];
    if (next >= slots.size() || slots[next].first != name) {
      throw std::runtime_error("load_checkpoint: unexpected tensor " + name);
    }
    Tensor t = Tensor::zeros(shape);
    if (t.shape != slots[next].second->shape) {
      throw std::runtime_error("load_checkpoint: shape mismatch for " + name);
    }
    if (!std::getline(in, line)) throw std::runtime_error("load_checkpoint: missing values for " + name);
    std::istringstream vals(line);
    for (int i = 0; i < t.numel(); ++i) {
      if (!(vals >> t.at(i))) throw std::runtime_error("load_checkpoint: short value row for " + name);
    }
    *slots[next].second = std::move(t);
    ++next;
  }
  if (next != slots.size()) throw std::runtime_error("load_checkpoint: missing tensors in " + path);
  return p;
}

void export_filters_csv(const ModelParams& p, const std::string& path) {
  if (p.attn.filters.empty()) {
    throw std::runtime_error("export_filters_csv: model has no CNN filters (mode " +
                             std::string(attend_axis_name(p.config.mode.axis)) + "/" +
                             integration_name(p.config.mode.integration) + ")");
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_filters_csv: cannot open " + path);
  char buf[40];
  const Tensor& f = p.attn.filters;
  for (int i = 0; i < f.rows(); ++i) {
    for (int j = 0; j < f.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", f.at(i, j));
      out << (j ? "," : "") << buf;
    }
    out << "\n";
  }
}

}  // namespace tpa
