#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>

namespace logdet {

using Index = Eigen::Index;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Dense n x n real matrix with finite entries, row-major.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  /// Throws InvalidArgument if `m` is not square, empty, or has a non-finite entry.
  explicit SquareMatrix(Matrix m);

  static SquareMatrix identity(Index n);
  static SquareMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  Index n() const noexcept { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }
  std::span<const double> row(Index i) const {
    return {m_.data() + i * n(), static_cast<std::size_t>(n())};
  }
  const Matrix& mat() const noexcept { return m_; }

  friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  Matrix m_;
};

/// p x n row block (the first p rows of a square draw), 1 <= p <= n.
class RectMatrix {
 public:
  RectMatrix() = default;
  explicit RectMatrix(Matrix m);

  Index rows() const noexcept { return m_.rows(); }
  Index cols() const noexcept { return m_.cols(); }
  double operator()(Index i, Index j) const { return m_(i, j); }
  const Matrix& mat() const noexcept { return m_; }

 private:
  Matrix m_;
};

}  // namespace logdet
