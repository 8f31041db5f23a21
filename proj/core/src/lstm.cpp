#include "tpa/lstm.hpp"

#include <cmath>

namespace tpa {

namespace {

Tensor uniform_matrix(int rows, int cols, Rng& rng) {
  double bound = 1.0 / std::sqrt(static_cast<double>(cols));
  Tensor t = Tensor::zeros({rows, cols});
  for (int i = 0; i < t.numel(); ++i) t.at(i) = rng.uniform(-bound, bound);
  return t;
}

}  // namespace

void LstmCellParams::for_each_tensor(const std::string& prefix, const TensorVisitor& visit) {
  visit(prefix + "/W_xi", w_xi);
  visit(prefix + "/W_xf", w_xf);
  visit(prefix + "/W_xo", w_xo);
  visit(prefix + "/W_xg", w_xg);
  visit(prefix + "/W_hi", w_hi);
  visit(prefix + "/W_hf", w_hf);
  visit(prefix + "/W_ho", w_ho);
  visit(prefix + "/W_hg", w_hg);
  if (has_bias()) {
    visit(prefix + "/b_i", b_i);
    visit(prefix + "/b_f", b_f);
    visit(prefix + "/b_o", b_o);
    visit(prefix + "/b_g", b_g);
  }
}

void LstmCellParams::for_each_tensor(const std::string& prefix, const ConstTensorVisitor& visit) const {
  const_cast<LstmCellParams*>(this)->for_each_tensor(
      prefix, [&](const std::string& name, Tensor& t) { visit(name, t); });
}

LstmCellParams init_lstm_cell(int input_size, int hidden_size, bool bias, Rng& rng) {
  LstmCellParams p;
  p.w_xi = uniform_matrix(hidden_size, input_size, rng);
  p.w_xf = uniform_matrix(hidden_size, input_size, rng);
  p.w_xo = uniform_matrix(hidden_size, input_size, rng);
  p.w_xg = uniform_matrix(hidden_size, input_size, rng);
  p.w_hi = uniform_matrix(hidden_size, hidden_size, rng);
  p.w_hf = uniform_matrix(hidden_size, hidden_size, rng);
  p.w_ho = uniform_matrix(hidden_size, hidden_size, rng);
  p.w_hg = uniform_matrix(hidden_size, hidden_size, rng);
  if (bias) {
    p.b_i = Tensor::zeros({hidden_size});
    p.b_f = Tensor::full({hidden_size}, 1.0);
    p.b_o = Tensor::zeros({hidden_size});
    p.b_g = Tensor::zeros({hidden_size});
  }
  return p;
}

namespace {

Tensor gate_preact(const Tensor& wx, const Tensor& wh, const Tensor& b,
                   const Tensor& x, const Tensor& h) {
  Tensor z = add(matmul(wx, x), matmul(wh, h));
  if (!b.empty()) z = add(z, b);
  return z;
}

}  // namespace

LstmState lstm_cell_step(const LstmCellParams& p, const Tensor& x, const LstmState& prev) {
  if (x.rank() != 1 || x.numel() != p.input_size()) {
    throw ShapeError("lstm_cell_step: input shape " + shape_str(x.shape) + " does not match cell input size " +
                     std::to_string(p.input_size()));
  }
  if (prev.h.numel() != p.hidden_size() || prev.c.numel() != p.hidden_size()) {
    throw ShapeError("lstm_cell_step: state size does not match cell hidden size " +
                     std::to_string(p.hidden_size()));
  }
  Tensor i = sigmoid(gate_preact(p.w_xi, p.w_hi, p.b_i, x, prev.h));
  Tensor f = sigmoid(gate_preact(p.w_xf, p.w_hf, p.b_f, x, prev.h));
  Tensor o = sigmoid(gate_preact(p.w_xo, p.w_ho, p.b_o, x, prev.h));
  Tensor g = tanh(gate_preact(p.w_xg, p.w_hg, p.b_g, x, prev.h));
  Tensor c = add(mul(f, prev.c), mul(i, g));
  Tensor h = mul(o, tanh(c));
  return {h, c};
}

void LstmStackParams::for_each_tensor(const TensorVisitor& visit) {
  for (size_t l = 0; l < layers.size(); ++l) {
    layers[l].for_each_tensor("layer" + std::to_string(l), visit);
  }
}

void LstmStackParams::for_each_tensor(const ConstTensorVisitor& visit) const {
  for (size_t l = 0; l < layers.size(); ++l) {
    layers[l].for_each_tensor("layer" + std::to_string(l), visit);
  }
}

LstmStackParams init_lstm_stack(int input_size, int hidden_size, int layers, bool bias, Rng& rng) {
  LstmStackParams stack;
  for (int l = 0; l < layers; ++l) {
    stack.layers.push_back(init_lstm_cell(l == 0 ? input_size : hidden_size, hidden_size, bias, rng));
  }
  return stack;
}

StackTrace lstm_stack_forward(const LstmStackParams& stack, const Tensor& window) {
  if (stack.layers.empty()) throw ShapeError("lstm_stack_forward: empty stack");
  if (window.rank() != 2) throw ShapeError("lstm_stack_forward: window must be rank 2, got " + shape_str(window.shape));
  if (window.rows() != stack.layers.front().input_size()) {
    throw ShapeError("lstm_stack_forward: window rows " + std::to_string(window.rows()) +
                     " do not match stack input size " + std::to_string(stack.layers.front().input_size()));
  }
  for (size_t l = 1; l < stack.layers.size(); ++l) {
    if (stack.layers[l].input_size() != stack.layers[l - 1].hidden_size()) {
      throw ShapeError("lstm_stack_forward: layer " + std::to_string(l) + " input size mismatch");
    }
  }

  int w = window.cols();
  std::vector<LstmState> state;
  for (const LstmCellParams& cell : stack.layers) {
    state.push_back({Tensor::zeros({cell.hidden_size()}), Tensor::zeros({cell.hidden_size()})});
  }

  std::vector<Tensor> top;
  top.reserve(static_cast<size_t>(w));
  for (int t = 0; t < w; ++t) {
    Tensor x = column(window, t);
    for (size_t l = 0; l < stack.layers.size(); ++l) {
      state[l] = lstm_cell_step(stack.layers[l], x, state[l]);
      x = state[l].h;
    }
    top.push_back(state.back().h);
  }

  StackTrace trace;
  trace.hidden_history = concat_cols(top);
  trace.final_state = std::move(state);
  return trace;
}

Tensor linear(const Tensor& weight, const Tensor& input) { return matmul(weight, input); }

long param_count(const Tensor& t) { return t.numel(); }

long param_count(const LstmCellParams& p) {
  long n = 0;
  p.for_each_tensor("", [&](const std::string&, const Tensor& t) { n += t.numel(); });
  return n;
}

long param_count(const LstmStackParams& p) {
  long n = 0;
  for (const LstmCellParams& cell : p.layers) n += param_count(cell);
  return n;
}

}  // namespace tpa
