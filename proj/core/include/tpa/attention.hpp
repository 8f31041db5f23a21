#pragma once

#include "tpa/lstm.hpp"

namespace tpa {

// What the attention scores range over.
enum class AttendAxis { Position, Filter, WithoutCnn };
enum class Activation { Sigmoid, Softmax };
enum class Integration { Scored, Concat };

struct AttentionMode {
  AttendAxis axis = AttendAxis::Position;
  Activation activation = Activation::Sigmoid;
  Integration integration = Integration::Scored;
};

const char* attend_axis_name(AttendAxis a);
const char* activation_name(Activation a);
const char* integration_name(Integration a);

// Attention and output-head parameters. Shapes depend on the mode
// (m = hidden size, w = window, k = filters, T = filter length):
//   position:    filters (k,T), w_a (k,m), w_v (m,k)
//   filter:      filters (k,T), w_a (m,m), w_v (m,m)
//   without-cnn: no filters,    w_a (w,m), w_v (m,w)
//   concat:      no filters, no w_a,       w_v (m, m*w)
// w_h is (m,m) and w_hprime (n_out,m) in every mode. The Luong baseline
// reuses this bundle with w_a (m,m) as its bilinear map and w_v (m,m).
struct TpaParams {
  Tensor filters;
  Tensor w_a;
  Tensor w_h;
  Tensor w_v;
  Tensor w_hprime;
  AttentionMode mode;
};

// Row-wise valid convolution of the hidden history against the filter bank;
// one output per (row, filter).
Tensor temporal_conv(const Tensor& hidden_history, const Tensor& filters);

// (hc_row)^T W_a h_t, as a scalar tensor.
Tensor score(const Tensor& hc_row, const Tensor& h_t, const Tensor& w_a);

Tensor attention_weights(const Tensor& scores, Activation activation);

// v = sum_i weights[i] * hc_row_i, i.e. (hc)^T weights.
Tensor context_vector(const Tensor& weights, const Tensor& hc);

// h' = W_h h_t + W_v v_t; y = W_h' h'.
Tensor tpa_output(const Tensor& h_t, const Tensor& v_t, const TpaParams& p);

// Softmax attention over the columns of the hidden history with bilinear
// scores h_i^T W h_t.
Tensor luong_attention(const Tensor& hidden_history, const Tensor& h_t, const Tensor& w);

// Context vector for any mode. hc may be empty for the without-cnn and
// concat variants; concat returns the column-stacked hidden history.
Tensor ablation_attend(const Tensor& hidden_history, const Tensor& hc, const Tensor& h_t,
                       const AttentionMode& mode, const TpaParams& p);

}  // namespace tpa
