#include "tpa/ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tpa {

const char* primitive_name(Primitive kind) {
  switch (kind) {
    case Primitive::Leaf: return "leaf";
    case Primitive::Matmul: return "matmul";
    case Primitive::Add: return "add";
    case Primitive::Sub: return "sub";
    case Primitive::Mul: return "mul";
    case Primitive::Scale: return "scale";
    case Primitive::AddScalar: return "add_scalar";
    case Primitive::Sigmoid: return "sigmoid";
    case Primitive::Tanh: return "tanh";
    case Primitive::Log: return "log";
    case Primitive::Abs: return "abs";
    case Primitive::Clamp: return "clamp";
    case Primitive::Softmax: return "softmax";
    case Primitive::Conv1dRows: return "conv1d_rows";
    case Primitive::ConcatCols: return "concat_cols";
    case Primitive::SliceCols: return "slice_cols";
    case Primitive::Transpose: return "transpose";
    case Primitive::Reshape: return "reshape";
    case Primitive::Sum: return "sum";
    case Primitive::Mean: return "mean";
    case Primitive::SumRows: return "sum_rows";
  }
  return "unknown";
}

namespace {

[[noreturn]] void shape_fail(Primitive kind, const std::string& what,
                             const std::vector<Tensor>& inputs) {
  std::string msg = std::string(primitive_name(kind)) + ": " + what + " (shapes";
  for (const Tensor& t : inputs) msg += " " + shape_str(t.shape);
  msg += ")";
  throw ShapeError(msg);
}

void need_inputs(Primitive kind, const std::vector<Tensor>& inputs, size_t n) {
  if (inputs.size() != n) {
    shape_fail(kind, "expected " + std::to_string(n) + " inputs, got " +
               std::to_string(inputs.size()), inputs);
  }
}

double stable_sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

Tensor forward_matmul(const std::vector<Tensor>& in) {
  const Tensor& a = in[0];
  const Tensor& b = in[1];
  if (a.rank() != 2) shape_fail(Primitive::Matmul, "left operand must be rank 2", in);
  if (b.rank() != 1 && b.rank() != 2) shape_fail(Primitive::Matmul, "right operand must be rank 1 or 2", in);
  int m = a.rows(), n = a.cols();
  if (b.rank() == 1) {
    if (b.dim(0) != n) shape_fail(Primitive::Matmul, "inner extents differ", in);
    Tensor out = Tensor::zeros({m});
    for (int i = 0; i < m; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += a.at(i, j) * b.at(j);
      out.at(i) = acc;
    }
    return out;
  }
  if (b.rows() != n) shape_fail(Primitive::Matmul, "inner extents differ", in);
  int p = b.cols();
  Tensor out = Tensor::zeros({m, p});
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) {
      double aij = a.at(i, j);
      if (aij == 0.0) continue;
      for (int c = 0; c < p; ++c) out.at(i, c) += aij * b.at(j, c);
    }
  }
  return out;
}

Tensor forward_elementwise2(Primitive kind, const std::vector<Tensor>& in) {
  const Tensor& a = in[0];
  const Tensor& b = in[1];
  if (!same_shape(a, b)) shape_fail(kind, "operand shapes differ", in);
  Tensor out = Tensor::zeros(a.shape);
  int n = a.numel();
  switch (kind) {
    case Primitive::Add:
      for (int i = 0; i < n; ++i) out.at(i) = a.at(i) + b.at(i);
      break;
    case Primitive::Sub:
      for (int i = 0; i < n; ++i) out.at(i) = a.at(i) - b.at(i);
      break;
    case Primitive::Mul:
      for (int i = 0; i < n; ++i) out.at(i) = a.at(i) * b.at(i);
      break;
    default: shape_fail(kind, "internal dispatch error", in);
  }
  return out;
}

Tensor forward_unary(Primitive kind, const std::vector<Tensor>& in, const PrimitiveAttrs& attrs) {
  const Tensor& a = in[0];
  Tensor out = Tensor::zeros(a.shape);
  int n = a.numel();
  switch (kind) {
    case Primitive::Scale:
      for (int i = 0; i < n; ++i) out.at(i) = attrs.alpha * a.at(i);
      break;
    case Primitive::AddScalar:
      for (int i = 0; i < n; ++i) out.at(i) = a.at(i) + attrs.alpha;
      break;
    case Primitive::Sigmoid:
      for (int i = 0; i < n; ++i) out.at(i) = stable_sigmoid(a.at(i));
      break;
    case Primitive::Tanh:
      for (int i = 0; i < n; ++i) out.at(i) = std::tanh(a.at(i));
      break;
    case Primitive::Log:
      for (int i = 0; i < n; ++i) {
        if (!(a.at(i) > 0.0)) throw NumericError("log: non-positive input value");
        out.at(i) = std::log(a.at(i));
      }
      break;
    case Primitive::Abs:
      for (int i = 0; i < n; ++i) out.at(i) = std::fabs(a.at(i));
      break;
    case Primitive::Clamp:
      if (attrs.lo > attrs.hi) throw ShapeError("clamp: lo > hi");
      for (int i = 0; i < n; ++i) out.at(i) = std::min(attrs.hi, std::max(attrs.lo, a.at(i)));
      break;
    default: shape_fail(kind, "internal dispatch error", in);
  }
  return out;
}

Tensor forward_softmax(const std::vector<Tensor>& in) {
  const Tensor& a = in[0];
  if (a.rank() != 1) shape_fail(Primitive::Softmax, "expects a rank-1 tensor", in);
  int n = a.numel();
  double mx = a.at(0);
  for (int i = 1; i < n; ++i) mx = std::max(mx, a.at(i));
  Tensor out = Tensor::zeros(a.shape);
  double denom = 0.0;
  for (int i = 0; i < n; ++i) {
    out.at(i) = std::exp(a.at(i) - mx);
    denom += out.at(i);
  }
  for (int i = 0; i < n; ++i) out.at(i) /= denom;
  return out;
}

Tensor forward_conv1d_rows(const std::vector<Tensor>& in) {
  const Tensor& h = in[0];
  const Tensor& f = in[1];
  if (h.rank() != 2 || f.rank() != 2) shape_fail(Primitive::Conv1dRows, "expects two rank-2 tensors", in);
  int w = h.cols(), t = f.cols();
  if (t > w) shape_fail(Primitive::Conv1dRows, "filter longer than window", in);
  int m = h.rows(), k = f.rows();
  Tensor out = Tensor::zeros({m, k});
  int off = w - t;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < k; ++j) {
      double acc = 0.0;
      for (int l = 0; l < t; ++l) acc += h.at(i, off + l) * f.at(j, l);
      out.at(i, j) = acc;
    }
  }
  return out;
}

Tensor forward_concat_cols(const std::vector<Tensor>& in) {
  if (in.empty()) throw ShapeError("concat_cols: no inputs");
  int m = in[0].numel();
  for (const Tensor& t : in) {
    if (t.rank() != 1 || t.numel() != m) shape_fail(Primitive::ConcatCols, "columns must be equal-length vectors", in);
  }
  int n = static_cast<int>(in.size());
  Tensor out = Tensor::zeros({m, n});
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) out.at(i, j) = in[static_cast<size_t>(j)].at(i);
  }
  return out;
}

Tensor forward_slice_cols(const std::vector<Tensor>& in, const PrimitiveAttrs& attrs) {
  const Tensor& a = in[0];
  if (a.rank() != 2) shape_fail(Primitive::SliceCols, "expects a rank-2 tensor", in);
  int c0 = attrs.col_begin, c1 = attrs.col_end;
  if (c0 < 0 || c1 > a.cols() || c0 >= c1) {
    shape_fail(Primitive::SliceCols, "column range [" + std::to_string(c0) + "," +
               std::to_string(c1) + ") out of bounds", in);
  }
  Tensor out = Tensor::zeros({a.rows(), c1 - c0});
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = c0; j < c1; ++j) out.at(i, j - c0) = a.at(i, j);
  }
  return out;
}

Tensor forward_transpose(const std::vector<Tensor>& in) {
  const Tensor& a = in[0];
  if (a.rank() != 2) shape_fail(Primitive::Transpose, "expects a rank-2 tensor", in);
  Tensor out = Tensor::zeros({a.cols(), a.rows()});
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) out.at(j, i) = a.at(i, j);
  }
  return out;
}

Tensor forward_reshape(const std::vector<Tensor>& in, const PrimitiveAttrs& attrs) {
  const Tensor& a = in[0];
  if (numel_of(attrs.target) != a.numel()) {
    shape_fail(Primitive::Reshape, "target " + shape_str(attrs.target) + " has different element count", in);
  }
  return Tensor(attrs.target, a.values);
}

Tensor forward_reduce(Primitive kind, const std::vector<Tensor>& in) {
  const Tensor& a = in[0];
  double acc = 0.0;
  for (int i = 0; i < a.numel(); ++i) acc += a.at(i);
  if (kind == Primitive::Mean) acc /= a.numel();
  return Tensor::scalar(acc);
}

Tensor forward_sum_rows(const std::vector<Tensor>& in) {
  const Tensor& a = in[0];
  if (a.rank() != 2) shape_fail(Primitive::SumRows, "expects a rank-2 tensor", in);
  Tensor out = Tensor::zeros({a.rows()});
  for (int i = 0; i < a.rows(); ++i) {
    double acc = 0.0;
    for (int j = 0; j < a.cols(); ++j) acc += a.at(i, j);
    out.at(i) = acc;
  }
  return out;
}

Tensor compute_forward(Primitive kind, const std::vector<Tensor>& inputs,
                       const PrimitiveAttrs& attrs) {
  switch (kind) {
    case Primitive::Matmul:
      need_inputs(kind, inputs, 2);
      return forward_matmul(inputs);
    case Primitive::Add:
    case Primitive::Sub:
    case Primitive::Mul:
      need_inputs(kind, inputs, 2);
      return forward_elementwise2(kind, inputs);
    case Primitive::Scale:
    case Primitive::AddScalar:
    case Primitive::Sigmoid:
    case Primitive::Tanh:
    case Primitive::Log:
    case Primitive::Abs:
    case Primitive::Clamp:
      need_inputs(kind, inputs, 1);
      return forward_unary(kind, inputs, attrs);
    case Primitive::Softmax:
      need_inputs(kind, inputs, 1);
      return forward_softmax(inputs);
    case Primitive::Conv1dRows:
      need_inputs(kind, inputs, 2);
      return forward_conv1d_rows(inputs);
    case Primitive::ConcatCols:
      return forward_concat_cols(inputs);
    case Primitive::SliceCols:
      need_inputs(kind, inputs, 1);
      return forward_slice_cols(inputs, attrs);
    case Primitive::Transpose:
      need_inputs(kind, inputs, 1);
      return forward_transpose(inputs);
    case Primitive::Reshape:
      need_inputs(kind, inputs, 1);
      return forward_reshape(inputs, attrs);
    case Primitive::Sum:
    case Primitive::Mean:
      need_inputs(kind, inputs, 1);
      return forward_reduce(kind, inputs);
    case Primitive::SumRows:
      need_inputs(kind, inputs, 1);
      return forward_sum_rows(inputs);
    case Primitive::Leaf:
      break;
  }
  throw ShapeError("apply_primitive: unknown primitive kind " +
                   std::to_string(static_cast<int>(kind)));
}

}  // namespace

Tensor apply_primitive(Primitive kind, const std::vector<Tensor>& inputs,
                       const PrimitiveAttrs& attrs) {
  Tensor out = compute_forward(kind, inputs, attrs);

  Tape* tape = nullptr;
  for (const Tensor& t : inputs) {
    if (t.tape == nullptr) continue;
    if (tape == nullptr) {
      tape = t.tape;
    } else if (tape != t.tape) {
      throw TapeError(std::string(primitive_name(kind)) + ": inputs belong to different tapes");
    }
  }
  if (tape != nullptr) {
    std::vector<int> ids;
    ids.reserve(inputs.size());
    for (const Tensor& t : inputs) ids.push_back(tape->node_of(t));
    out.node = tape->record(kind, attrs, std::move(ids), out);
    out.tape = tape;
  }
  return out;
}

Tensor matmul(const Tensor& a, const Tensor& b) { return apply_primitive(Primitive::Matmul, {a, b}); }
Tensor add(const Tensor& a, const Tensor& b) { return apply_primitive(Primitive::Add, {a, b}); }
Tensor sub(const Tensor& a, const Tensor& b) { return apply_primitive(Primitive::Sub, {a, b}); }
Tensor mul(const Tensor& a, const Tensor& b) { return apply_primitive(Primitive::Mul, {a, b}); }

Tensor scale(const Tensor& a, double c) {
  PrimitiveAttrs attrs;
  attrs.alpha = c;
  return apply_primitive(Primitive::Scale, {a}, attrs);
}

Tensor add_scalar(const Tensor& a, double c) {
  PrimitiveAttrs attrs;
  attrs.alpha = c;
  return apply_primitive(Primitive::AddScalar, {a}, attrs);
}

Tensor sigmoid(const Tensor& a) { return apply_primitive(Primitive::Sigmoid, {a}); }
Tensor tanh(const Tensor& a) { return apply_primitive(Primitive::Tanh, {a}); }
Tensor log(const Tensor& a) { return apply_primitive(Primitive::Log, {a}); }
Tensor abs(const Tensor& a) { return apply_primitive(Primitive::Abs, {a}); }

Tensor clamp(const Tensor& a, double lo, double hi) {
  PrimitiveAttrs attrs;
  attrs.lo = lo;
  attrs.hi = hi;
  return apply_primitive(Primitive::Clamp, {a}, attrs);
}

Tensor softmax(const Tensor& a) { return apply_primitive(Primitive::Softmax, {a}); }

Tensor conv1d_rows(const Tensor& h, const Tensor& filters) {
  return apply_primitive(Primitive::Conv1dRows, {h, filters});
}

Tensor concat_cols(const std::vector<Tensor>& columns) {
  return apply_primitive(Primitive::ConcatCols, columns);
}

Tensor slice_cols(const Tensor& a, int col_begin, int col_end) {
  PrimitiveAttrs attrs;
  attrs.col_begin = col_begin;
  attrs.col_end = col_end;
  return apply_primitive(Primitive::SliceCols, {a}, attrs);
}

Tensor column(const Tensor& a, int col) {
  return reshape(slice_cols(a, col, col + 1), {a.rows()});
}

Tensor transpose(const Tensor& a) { return apply_primitive(Primitive::Transpose, {a}); }

Tensor reshape(const Tensor& a, Shape target) {
  PrimitiveAttrs attrs;
  attrs.target = std::move(target);
  return apply_primitive(Primitive::Reshape, {a}, attrs);
}

Tensor sum(const Tensor& a) { return apply_primitive(Primitive::Sum, {a}); }
Tensor mean(const Tensor& a) { return apply_primitive(Primitive::Mean, {a}); }
Tensor sum_rows(const Tensor& a) { return apply_primitive(Primitive::SumRows, {a}); }

// ---------------------------------------------------------------------------
// Tape

const Tensor& Gradients::at(int node) const {
  if (node < 0 || node >= size()) throw TapeError("gradients: node id out of range");
  return grads_[static_cast<size_t>(node)];
}

const Tensor& Gradients::at(const Tensor& t) const {
  if (t.node < 0) throw TapeError("gradients: tensor is not on the tape");
  return at(t.node);
}

Tensor Tape::watch(const Tensor& t) {
  Tensor out = t;
  out.tape = this;
  out.node = record(Primitive::Leaf, {}, {}, t);
  return out;
}

int Tape::record(Primitive kind, PrimitiveAttrs attrs, std::vector<int> inputs, const Tensor& out) {
  int id = static_cast<int>(records_.size());
  for (int in : inputs) {
    if (in < 0 || in >= id) throw TapeError("tape: input node id out of order");
  }
  TapeRecord rec;
  rec.kind = kind;
  rec.attrs = std::move(attrs);
  rec.inputs = std::move(inputs);
  rec.shape = out.shape;
  rec.value = out.values;
  records_.push_back(std::move(rec));
  return id;
}

int Tape::node_of(const Tensor& t) {
  if (t.tape != nullptr) {
    if (t.tape != this) throw TapeError("tape: tensor belongs to a different tape");
    return t.node;
  }
  // Constant input: registered as an anonymous leaf.
  return record(Primitive::Leaf, {}, {}, t);
}

namespace {

// Accumulates d(output)/d(input) for one record given the output gradient.
void backprop_record(const TapeRecord& rec, const std::vector<TapeRecord>& records,
                     const Tensor& g, std::vector<Tensor>& grads) {
  auto in_val = [&](int which) -> const TapeRecord& {
    return records[static_cast<size_t>(rec.inputs[static_cast<size_t>(which)])];
  };
  auto in_grad = [&](int which) -> Tensor& {
    return grads[static_cast<size_t>(rec.inputs[static_cast<size_t>(which)])];
  };

  switch (rec.kind) {
    case Primitive::Leaf:
      return;
    case Primitive::Matmul: {
      const TapeRecord& a = in_val(0);
      const TapeRecord& b = in_val(1);
      Tensor& da = in_grad(0);
      Tensor& db = in_grad(1);
      int m = a.shape[0], n = a.shape[1];
      if (b.shape.size() == 1) {
        for (int i = 0; i < m; ++i) {
          double gi = g.at(i);
          if (gi == 0.0) continue;
          for (int j = 0; j < n; ++j) {
            da.at(i, j) += gi * b.value[static_cast<size_t>(j)];
            db.at(j) += gi * a.value[static_cast<size_t>(i) * n + j];
          }
        }
      } else {
        int p = b.shape[1];
        for (int i = 0; i < m; ++i) {
          for (int c = 0; c < p; ++c) {
            double gic = g.at(i, c);
            if (gic == 0.0) continue;
            for (int j = 0; j < n; ++j) {
              da.at(i, j) += gic * b.value[static_cast<size_t>(j) * p + c];
              db.at(j, c) += gic * a.value[static_cast<size_t>(i) * n + j];
            }
          }
        }
      }
      return;
    }
    case Primitive::Add: {
      Tensor& da = in_grad(0);
      Tensor& db = in_grad(1);
      for (int i = 0; i < g.numel(); ++i) {
        da.at(i) += g.at(i);
        db.at(i) += g.at(i);
      }
      return;
    }
    case Primitive::Sub: {
      Tensor& da = in_grad(0);
      Tensor& db = in_grad(1);
      for (int i = 0; i < g.numel(); ++i) {
        da.at(i) += g.at(i);
        db.at(i) -= g.at(i);
      }
      return;
    }
    case Primitive::Mul: {
      const TapeRecord& a = in_val(0);
      const TapeRecord& b = in_val(1);
      Tensor& da = in_grad(0);
      Tensor& db = in_grad(1);
      for (int i = 0; i < g.numel(); ++i) {
        da.at(i) += g.at(i) * b.value[static_cast<size_t>(i)];
        db.at(i) += g.at(i) * a.value[static_cast<size_t>(i)];
      }
      return;
    }
    case Primitive::Scale: {
      Tensor& da = in_grad(0);
      for (int i = 0; i < g.numel(); ++i) da.at(i) += rec.attrs.alpha * g.at(i);
      return;
    }
    case Primitive::AddScalar: {
      Tensor& da = in_grad(0);
      for (int i = 0; i < g.numel(); ++i) da.at(i) += g.at(i);
      return;
    }
    case Primitive::Sigmoid: {
      Tensor& da = in_grad(0);
      for (int i = 0; i < g.numel(); ++i) {
        double s = rec.value[static_cast<size_t>(i)];
        da.at(i) += g.at(i) * s * (1.0 - s);
      }
      return;
    }
    case Primitive::Tanh: {
      Tensor& da = in_grad(0);
      for (int i = 0; i < g.numel(); ++i) {
        double y = rec.value[static_cast<size_t>(i)];
        da.at(i) += g.at(i) * (1.0 - y * y);
      }
      return;
    }
    case Primitive::Log: {
      const TapeRecord& a = in_val(0);
      Tensor& da = in_grad(0);
      for (int i = 0; i < g.numel(); ++i) da.at(i) += g.at(i) / a.value[static_cast<size_t>(i)];
      return;
    }
    case Primitive::Abs: {
      const TapeRecord& a = in_val(0);
      Tensor& da = in_grad(0);
      for (int i = 0; i < g.numel(); ++i) {
        double x = a.value[static_cast<size_t>(i)];
        double s = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
        da.at(i) += g.at(i) * s;
      }
      return;
    }
    case Primitive::Clamp: {
      const TapeRecord& a = in_val(0);
      Tensor& da = in_grad(0);
      for (int i = 0; i < g.numel(); ++i) {
        double x = a.value[static_cast<size_t>(i)];
        if (x >= rec.attrs.lo && x <= rec.attrs.hi) da.at(i) += g.at(i);
      }
      return;
    }
    case Primitive::Softmax: {
      Tensor& da = in_grad(0);
      double dot = 0.0;
      for (int i = 0; i < g.numel(); ++i) dot += g.at(i) * rec.value[static_cast<size_t>(i)];
      for (int i = 0; i < g.numel(); ++i) {
        double y = rec.value[static_cast<size_t>(i)];
        da.at(i) += y * (g.at(i) - dot);
      }
      return;
    }
    case Primitive::Conv1dRows: {
      const TapeRecord& h = in_val(0);
      const TapeRecord& f = in_val(1);
      Tensor& dh = in_grad(0);
      Tensor& df = in_grad(1);
      int w = h.shape[1], t = f.shape[1];
      int m = h.shape[0], k = f.shape[0];
      int off = w - t;
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < k; ++j) {
          double gij = g.at(i, j);
          if (gij == 0.0) continue;
          for (int l = 0; l < t; ++l) {
            dh.at(i, off + l) += gij * f.value[static_cast<size_t>(j) * t + l];
            df.at(j, l) += gij * h.value[static_cast<size_t>(i) * w + off + l];
          }
        }
      }
      return;
    }
    case Primitive::ConcatCols: {
      int m = g.rows();
      for (size_t j = 0; j < rec.inputs.size(); ++j) {
        Tensor& dc = grads[static_cast<size_t>(rec.inputs[j])];
        for (int i = 0; i < m; ++i) dc.at(i) += g.at(i, static_cast<int>(j));
      }
      return;
    }
    case Primitive::SliceCols: {
      Tensor& da = in_grad(0);
      for (int i = 0; i < g.rows(); ++i) {
        for (int j = 0; j < g.cols(); ++j) da.at(i, rec.attrs.col_begin + j) += g.at(i, j);
      }
      return;
    }
    case Primitive::Transpose: {
      Tensor& da = in_grad(0);
      for (int i = 0; i < g.rows(); ++i) {
        for (int j = 0; j < g.cols(); ++j) da.at(j, i) += g.at(i, j);
      }
      return;
    }
    case Primitive::Reshape: {
      Tensor& da = in_grad(0);
      for (int i = 0; i < g.numel(); ++i) da.at(i) += g.at(i);
      return;
    }
    case Primitive::Sum: {
      Tensor& da = in_grad(0);
      double gv = g.item();
      for (int i = 0; i < da.numel(); ++i) da.at(i) += gv;
      return;
    }
    case Primitive::Mean: {
      Tensor& da = in_grad(0);
      double gv = g.item() / da.numel();
      for (int i = 0; i < da.numel(); ++i) da.at(i) += gv;
      return;
    }
    case Primitive::SumRows: {
      Tensor& da = in_grad(0);
      for (int i = 0; i < da.rows(); ++i) {
        double gi = g.at(i);
        for (int j = 0; j < da.cols(); ++j) da.at(i, j) += gi;
      }
      return;
    }
  }
}

}  // namespace

Gradients Tape::backward(const Tensor& output) const {
  if (output.tape != this || output.node < 0 || output.node >= size()) {
    throw TapeError("backward: output is not a node of this tape");
  }
  if (output.numel() != 1) {
    throw TapeError("backward: output must be scalar-shaped, got " + shape_str(output.shape));
  }
  std::vector<Tensor> grads;
  grads.reserve(records_.size());
  for (const TapeRecord& rec : records_) grads.push_back(Tensor::zeros(rec.shape));
  grads[static_cast<size_t>(output.node)].at(0) = 1.0;

  for (int id = static_cast<int>(records_.size()) - 1; id >= 0; --id) {
    const TapeRecord& rec = records_[static_cast<size_t>(id)];
    if (rec.kind == Primitive::Leaf) continue;
    backprop_record(rec, records_, grads[static_cast<size_t>(id)], grads);
  }
  return Gradients(std::move(grads));
}

}  // namespace tpa
