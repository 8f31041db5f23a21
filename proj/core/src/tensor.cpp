#include "tpa/tensor.hpp"

#include <cmath>
#include <sstream>

namespace tpa {

int numel_of(const Shape& shape) {
  int n = 1;
  for (int d : shape) {
    if (d <= 0) throw ShapeError("tensor: non-positive extent in shape " + shape_str(shape));
    n *= d;
  }
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) os << ',';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape s, std::vector<double> v) : shape(std::move(s)), values(std::move(v)) {
  if (numel_of(shape) != static_cast<int>(values.size())) {
    throw ShapeError("tensor: shape " + shape_str(shape) + " does not match " +
                     std::to_string(values.size()) + " values");
  }
}

Tensor Tensor::zeros(Shape s) {
  int n = numel_of(s);
  return Tensor(std::move(s), std::vector<double>(static_cast<size_t>(n), 0.0));
}

Tensor Tensor::full(Shape s, double value) {
  int n = numel_of(s);
  return Tensor(std::move(s), std::vector<double>(static_cast<size_t>(n), value));
}

Tensor Tensor::scalar(double value) { return Tensor({}, {value}); }

Tensor Tensor::vector(std::vector<double> v) {
  int n = static_cast<int>(v.size());
  return Tensor({n}, std::move(v));
}

Tensor Tensor::matrix(int rows, int cols, std::vector<double> v) {
  return Tensor({rows, cols}, std::move(v));
}

Tensor Tensor::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  int r = static_cast<int>(rows.size());
  int c = r > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  std::vector<double> v;
  v.reserve(static_cast<size_t>(r) * c);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c) throw ShapeError("tensor: ragged initializer rows");
    v.insert(v.end(), row.begin(), row.end());
  }
  return Tensor({r, c}, std::move(v));
}

int Tensor::dim(int i) const {
  if (i < 0 || i >= rank()) throw ShapeError("tensor: dim " + std::to_string(i) + " out of range for " + shape_str(shape));
  return shape[static_cast<size_t>(i)];
}

double Tensor::item() const {
  if (numel() != 1) throw ShapeError("tensor: item() on non-scalar shape " + shape_str(shape));
  return values[0];
}

bool Tensor::all_finite() const {
  for (double v : values) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

bool same_shape(const Tensor& a, const Tensor& b) { return a.shape == b.shape; }

}  // namespace tpa
