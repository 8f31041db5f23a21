#include "tpa/attention.hpp"

namespace tpa {

const char* attend_axis_name(AttendAxis a) {
  switch (a) {
    case AttendAxis::Position: return "position";
    case AttendAxis::Filter: return "filter";
    case AttendAxis::WithoutCnn: return "without-cnn";
  }
  return "?";
}

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Softmax: return "softmax";
  }
  return "?";
}

const char* integration_name(Integration a) {
  switch (a) {
    case Integration::Scored: return "scored";
    case Integration::Concat: return "concat";
  }
  return "?";
}

Tensor temporal_conv(const Tensor& hidden_history, const Tensor& filters) {
  return conv1d_rows(hidden_history, filters);
}

Tensor score(const Tensor& hc_row, const Tensor& h_t, const Tensor& w_a) {
  return sum(mul(hc_row, matmul(w_a, h_t)));
}

Tensor attention_weights(const Tensor& scores, Activation activation) {
  return activation == Activation::Sigmoid ? sigmoid(scores) : softmax(scores);
}

Tensor context_vector(const Tensor& weights, const Tensor& hc) {
  return matmul(transpose(hc), weights);
}

Tensor tpa_output(const Tensor& h_t, const Tensor& v_t, const TpaParams& p) {
  Tensor hprime = add(matmul(p.w_h, h_t), matmul(p.w_v, v_t));
  return matmul(p.w_hprime, hprime);
}

Tensor luong_attention(const Tensor& hidden_history, const Tensor& h_t, const Tensor& w) {
  Tensor scores = matmul(transpose(hidden_history), matmul(w, h_t));
  Tensor alpha = softmax(scores);
  return matmul(hidden_history, alpha);
}

Tensor ablation_attend(const Tensor& hidden_history, const Tensor& hc, const Tensor& h_t,
                       const AttentionMode& mode, const TpaParams& p) {
  if (mode.integration == Integration::Concat) {
    int m = hidden_history.rows(), w = hidden_history.cols();
    return reshape(transpose(hidden_history), {m * w});
  }
  switch (mode.axis) {
    case AttendAxis::Position: {
      // scores over the m rows of hc, context in R^k
      Tensor scores = matmul(hc, matmul(p.w_a, h_t));
      Tensor alpha = attention_weights(scores, mode.activation);
      return context_vector(alpha, hc);
    }
    case AttendAxis::Filter: {
      // scores over the k columns of hc, context in R^m
      Tensor scores = matmul(transpose(hc), matmul(p.w_a, h_t));
      Tensor alpha = attention_weights(scores, mode.activation);
      return matmul(hc, alpha);
    }
    case AttendAxis::WithoutCnn: {
      // scores over the m rows of the raw hidden history, context in R^w
      Tensor scores = matmul(hidden_history, matmul(p.w_a, h_t));
      Tensor alpha = attention_weights(scores, mode.activation);
      return context_vector(alpha, hidden_history);
    }
  }
  throw ShapeError("ablation_attend: unknown attend axis");
}

}  // namespace tpa
