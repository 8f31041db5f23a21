#pragma once

#include <vector>

#include "tpa/tensor.hpp"

namespace tpa {

enum class Primitive {
  Leaf,
  Matmul,
  Add,
  Sub,
  Mul,
  Scale,
  AddScalar,
  Sigmoid,
  Tanh,
  Log,
  Abs,
  Clamp,
  Softmax,
  Conv1dRows,
  ConcatCols,
  SliceCols,
  Transpose,
  Reshape,
  Sum,
  Mean,
  SumRows,
};

const char* primitive_name(Primitive kind);

// Constant attributes of a primitive application (not differentiated).
struct PrimitiveAttrs {
  double alpha = 0.0;    // Scale factor / AddScalar addend
  double lo = 0.0;       // Clamp lower bound
  double hi = 0.0;       // Clamp upper bound
  int col_begin = 0;     // SliceCols range [col_begin, col_end)
  int col_end = 0;
  Shape target;          // Reshape target shape
};

struct TapeRecord {
  Primitive kind = Primitive::Leaf;
  PrimitiveAttrs attrs;
  std::vector<int> inputs;    // node ids; all strictly smaller than this node's id
  Shape shape;
  std::vector<double> value;  // forward values, saved for the backward pass
};

// Gradients of one backward pass, dense over all tape nodes.
class Gradients {
 public:
  explicit Gradients(std::vector<Tensor> grads) : grads_(std::move(grads)) {}

  const Tensor& at(int node) const;
  const Tensor& at(const Tensor& t) const;
  int size() const { return static_cast<int>(grads_.size()); }

 private:
  std::vector<Tensor> grads_;
};

// Ordered record of primitive applications for one forward computation.
// A tape is confined to one logical thread; independent tapes may run
// concurrently. Recording never perturbs forward values.
class Tape {
 public:
  // Registers a copy of t as a differentiable input and returns it.
  Tensor watch(const Tensor& t);

  // Appends one primitive application. Inputs must already be on this tape.
  int record(Primitive kind, PrimitiveAttrs attrs, std::vector<int> inputs, const Tensor& out);

  // Node id for t on this tape; constants are registered as anonymous leaves.
  int node_of(const Tensor& t);

  // Reverse sweep from a scalar-shaped output; returns d(output)/d(node)
  // for every node, in one pass over the records.
  Gradients backward(const Tensor& output) const;

  int size() const { return static_cast<int>(records_.size()); }
  const TapeRecord& record_at(int id) const { return records_[static_cast<size_t>(id)]; }

 private:
  std::vector<TapeRecord> records_;
};

}  // namespace tpa
