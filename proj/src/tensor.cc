#include "inflect/tensor.h"

#include <algorithm>
#include <cmath>

#include "inflect/errors.h"

namespace inflect {

size_t NumElements(const Shape& shape) {
  size_t n = 1;
  for (size_t d : shape) n *= d;
  return n;
}

std::string ShapeString(const Shape& shape) {
  std::string out = "(";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(shape[i]);
  }
  return out + ")";
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) {
  for (size_t d : shape_) {
    if (d == 0) throw ShapeError("zero-sized dimension in " + ShapeString(shape_));
  }
  data_.assign(NumElements(shape_), 0.0);
}

Tensor::Tensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  for (size_t d : shape_) {
    if (d == 0) throw ShapeError("zero-sized dimension in " + ShapeString(shape_));
  }
  if (NumElements(shape_) != data_.size()) {
    throw ShapeError("shape " + ShapeString(shape_) + " does not hold " +
                     std::to_string(data_.size()) + " elements");
  }
}

Tensor Tensor::Vector(std::vector<double> data) {
  const size_t n = data.size();
  return Tensor({n}, std::move(data));
}

Tensor Tensor::Matrix(size_t rows, size_t cols, std::vector<double> data) {
  return Tensor({rows, cols}, std::move(data));
}

Tensor Tensor::Scalar(double value) { return Tensor({1}, {value}); }

size_t Tensor::rows() const {
  if (rank() != 2) throw ShapeError("rows() on non-matrix " + ShapeString(shape_));
  return shape_[0];
}

size_t Tensor::cols() const {
  return rank() == 2 ? shape_[1] : shape_.empty() ? 0 : shape_[0];
}

bool Tensor::AllFinite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

void Tensor::Fill(double value) { std::fill(data_.begin(), data_.end(), value); }

}  // namespace inflect
