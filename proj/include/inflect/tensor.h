#ifndef INFLECT_TENSOR_H_
#define INFLECT_TENSOR_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace inflect {

using Shape = std::vector<size_t>;

// Dense row-major array of doubles. Rank 1 is a vector, rank 2 a matrix.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);
  Tensor(Shape shape, std::vector<double> data);

  static Tensor Vector(std::vector<double> data);
  static Tensor Matrix(size_t rows, size_t cols, std::vector<double> data);
  static Tensor Scalar(double value);

  const Shape& shape() const { return shape_; }
  size_t rank() const { return shape_.size(); }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }
  size_t rows() const;
  size_t cols() const;

  double operator[](size_t i) const { return data_[i]; }
  double& operator[](size_t i) { return data_[i]; }
  double at(size_t r, size_t c) const { return data_[r * cols() + c]; }
  double& at(size_t r, size_t c) { return data_[r * cols() + c]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }
  const std::vector<double>& values() const { return data_; }

  bool AllFinite() const;
  void Fill(double value);

 private:
  Shape shape_;
  std::vector<double> data_;
};

size_t NumElements(const Shape& shape);
std::string ShapeString(const Shape& shape);

}  // namespace inflect

#endif  // INFLECT_TENSOR_H_
