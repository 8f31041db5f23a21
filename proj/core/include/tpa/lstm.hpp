#pragma once

#include <functional>
#include <string>

#include "tpa/ops.hpp"
#include "tpa/rng.hpp"

namespace tpa {

using TensorVisitor = std::function<void(const std::string&, Tensor&)>;
using ConstTensorVisitor = std::function<void(const std::string&, const Tensor&)>;

// One LSTM cell: four input->hidden maps (m x n), four hidden->hidden maps
// (m x m) and four gate biases (length m). Biases are optional; the paper's
// literal recurrence omits them (see init_lstm_cell).
struct LstmCellParams {
  Tensor w_xi, w_xf, w_xo, w_xg;
  Tensor w_hi, w_hf, w_ho, w_hg;
  Tensor b_i, b_f, b_o, b_g;

  int input_size() const { return w_xi.cols(); }
  int hidden_size() const { return w_xi.rows(); }
  bool has_bias() const { return !b_i.empty(); }

  void for_each_tensor(const std::string& prefix, const TensorVisitor& visit);
  void for_each_tensor(const std::string& prefix, const ConstTensorVisitor& visit) const;
};

// Weights drawn uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)]; biases zero
// except the forget gate's, which starts at one.
LstmCellParams init_lstm_cell(int input_size, int hidden_size, bool bias, Rng& rng);

struct LstmState {
  Tensor h;
  Tensor c;
};

// i = sig(W_xi x + W_hi h [+ b_i]), f and o likewise,
// c = f.c_prev + i.tanh(W_xg x + W_hg h [+ b_g]), h = o.tanh(c).
LstmState lstm_cell_step(const LstmCellParams& p, const Tensor& x, const LstmState& prev);

struct LstmStackParams {
  std::vector<LstmCellParams> layers;

  void for_each_tensor(const TensorVisitor& visit);
  void for_each_tensor(const ConstTensorVisitor& visit) const;
};

LstmStackParams init_lstm_stack(int input_size, int hidden_size, int layers, bool bias, Rng& rng);

struct StackTrace {
  Tensor hidden_history;              // m x w, top layer, one column per step
  std::vector<LstmState> final_state; // per layer, after the last column
  const Tensor& h_last() const { return final_state.back().h; }
};

// Consumes the window column by column from zero initial states.
StackTrace lstm_stack_forward(const LstmStackParams& stack, const Tensor& window);

// weight (p x q) times input (q); the output heads carry no bias.
Tensor linear(const Tensor& weight, const Tensor& input);

long param_count(const Tensor& t);
long param_count(const LstmCellParams& p);
long param_count(const LstmStackParams& p);

}  // namespace tpa
