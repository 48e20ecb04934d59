#pragma once

#include <Eigen/Dense>

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "convgain/errors.hpp"

namespace convgain::nn {

using Index = Eigen::Index;
using Shape = std::vector<Index>;

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Index shape_size(const Shape& shape);
std::string shape_string(const Shape& shape);

/// Dense row-major n-dimensional array with an optional gradient buffer of the
/// same shape.
template <typename Scalar>
class Tensor {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using MatrixMap = Eigen::Map<RowMatrix<Scalar>>;
  using ConstMatrixMap = Eigen::Map<const RowMatrix<Scalar>>;

  Tensor() = default;

  explicit Tensor(Shape shape, Scalar fill = Scalar(0)) : shape_(std::move(shape)) {
    validate_shape(shape_);
    data_ = Vector::Constant(shape_size(shape_), fill);
  }

  Tensor(Shape shape, Vector data) : shape_(std::move(shape)), data_(std::move(data)) {
    validate_shape(shape_);
    require(shape_size(shape_) == data_.size(),
            "tensor data length " + std::to_string(data_.size()) + " does not match shape " +
                shape_string(shape_));
  }

  static Tensor zeros(Shape shape) { return Tensor(std::move(shape)); }

  const Shape& shape() const { return shape_; }
  Index rank() const { return static_cast<Index>(shape_.size()); }
  Index dim(Index axis) const { return shape_.at(static_cast<std::size_t>(axis)); }
  Index size() const { return data_.size(); }
  bool empty() const { return data_.size() == 0; }

  Vector& data() { return data_; }
  const Vector& data() const { return data_; }
  Scalar* raw() { return data_.data(); }
  const Scalar* raw() const { return data_.data(); }

  Scalar& operator[](Index i) { return data_[i]; }
  Scalar operator[](Index i) const { return data_[i]; }

  template <typename... Idx>
  Scalar& at(Idx... idx) {
    return data_[offset({static_cast<Index>(idx)...})];
  }
  template <typename... Idx>
  Scalar at(Idx... idx) const {
    return data_[offset({static_cast<Index>(idx)...})];
  }

  /// Row-major matrix view; rows * cols must equal size().
  MatrixMap matrix(Index rows, Index cols) {
    require(rows * cols == size(), "matrix view does not cover tensor");
    return MatrixMap(data_.data(), rows, cols);
  }
  ConstMatrixMap matrix(Index rows, Index cols) const {
    require(rows * cols == size(), "matrix view does not cover tensor");
    return ConstMatrixMap(data_.data(), rows, cols);
  }

  Tensor reshaped(Shape shape) const {
    require(shape_size(shape) == size(),
            "cannot reshape " + shape_string(shape_) + " to " + shape_string(shape));
    return Tensor(std::move(shape), data_);
  }

  bool has_grad() const { return grad_.has_value(); }
  Vector& grad() {
    ensure_grad();
    return *grad_;
  }
  const Vector& grad() const {
    require(grad_.has_value(), "tensor has no gradient buffer");
    return *grad_;
  }
  void ensure_grad() {
    if (!grad_) grad_ = Vector::Zero(size());
  }
  void zero_grad() {
    if (grad_) grad_->setZero();
  }
  void drop_grad() { grad_.reset(); }

  bool all_finite() const { return data_.allFinite(); }

 private:
  static void validate_shape(const Shape& shape) {
    for (Index e : shape) require(e >= 1, "tensor extents must be positive: " + shape_string(shape));
  }

  Index offset(std::initializer_list<Index> idx) const {
    require(idx.size() == shape_.size(), "index rank does not match tensor rank");
    Index off = 0;
    std::size_t axis = 0;
    for (Index i : idx) {
      off = off * shape_[axis] + i;
      ++axis;
    }
    return off;
  }

  Shape shape_;
  Vector data_;
  std::optional<Vector> grad_;
};

using TensorD = Tensor<double>;

/// Throws TrainingDiverged when the tensor holds NaN or Inf.
void require_finite(const TensorD& t, const std::string& what);

}  // namespace convgain::nn
