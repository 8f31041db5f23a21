#pragma once

#include <vector>

#include "tpa/tape.hpp"

namespace tpa {

// Uniform entry point for every primitive: validates shapes, computes the
// forward value and records the application when any input is on a tape.
Tensor apply_primitive(Primitive kind, const std::vector<Tensor>& inputs,
                       const PrimitiveAttrs& attrs = {});

// (m,n)x(n,p) -> (m,p), or (m,n)x(n) -> (m)
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);  // elementwise
Tensor scale(const Tensor& a, double c);
Tensor add_scalar(const Tensor& a, double c);
Tensor sigmoid(const Tensor& a);
Tensor tanh(const Tensor& a);
Tensor log(const Tensor& a);  // requires strictly positive values
Tensor abs(const Tensor& a);
Tensor clamp(const Tensor& a, double lo, double hi);
Tensor softmax(const Tensor& a);  // rank-1; max-subtracted

// h: (m,w), filters: (k,T) with T <= w. Output (m,k): each filter's T taps
// are aligned against the trailing T columns of each row.
Tensor conv1d_rows(const Tensor& h, const Tensor& filters);

Tensor concat_cols(const std::vector<Tensor>& columns);  // n vectors (m) -> (m,n)
Tensor slice_cols(const Tensor& a, int col_begin, int col_end);
Tensor column(const Tensor& a, int col);  // (m,n) -> (m)
Tensor transpose(const Tensor& a);
Tensor reshape(const Tensor& a, Shape target);
Tensor sum(const Tensor& a);       // -> scalar
Tensor mean(const Tensor& a);      // -> scalar
Tensor sum_rows(const Tensor& a);  // (m,n) -> (m)

}  // namespace tpa
