#pragma once

#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace tpa {

class Tape;

// Shape/value mismatches between operands of a primitive.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Misuse of the recording machinery (mixed tapes, missing nodes, ...).
struct TapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numeric domain violations (log of non-positive values, divergence, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Shape = std::vector<int>;

int numel_of(const Shape& shape);
std::string shape_str(const Shape& shape);

// Dense row-major array of doubles. Rank 0 (scalar), 1 (vector) and
// 2 (matrix) are the only ranks the models need. A tensor produced under
// an active tape additionally carries the id of its tape node so that
// downstream primitives keep recording; tensors are never mutated after
// construction.
struct Tensor {
  Shape shape;
  std::vector<double> values;
  Tape* tape = nullptr;
  int node = -1;

  Tensor() = default;
  Tensor(Shape s, std::vector<double> v);

  static Tensor zeros(Shape s);
  static Tensor full(Shape s, double value);
  static Tensor scalar(double value);
  static Tensor vector(std::vector<double> v);
  static Tensor matrix(int rows, int cols, std::vector<double> v);
  static Tensor from_rows(std::initializer_list<std::initializer_list<double>> rows);

  int rank() const { return static_cast<int>(shape.size()); }
  int numel() const { return static_cast<int>(values.size()); }
  bool empty() const { return values.empty(); }
  int dim(int i) const;
  int rows() const { return dim(0); }
  int cols() const { return dim(1); }
  bool is_scalar() const { return numel() == 1; }

  double item() const;

  double at(int i) const { return values[static_cast<size_t>(i)]; }
  double& at(int i) { return values[static_cast<size_t>(i)]; }
  double at(int r, int c) const { return values[static_cast<size_t>(r) * cols() + c]; }
  double& at(int r, int c) { return values[static_cast<size_t>(r) * cols() + c]; }

  bool on_tape() const { return tape != nullptr && node >= 0; }
  bool all_finite() const;
};

bool same_shape(const Tensor& a, const Tensor& b);

}  // namespace tpa
