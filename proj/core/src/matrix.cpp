#include "logdet/matrix.hpp"

#include "logdet/errors.hpp"

namespace logdet {

SquareMatrix::SquareMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() == 0) {
    throw InvalidArgument("SquareMatrix: expected a nonempty square matrix");
  }
  if (!m_.allFinite()) throw InvalidArgument("SquareMatrix: non-finite entry");
}

SquareMatrix SquareMatrix::identity(Index n) { return SquareMatrix(Matrix::Identity(n, n)); }

SquareMatrix SquareMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const auto n = static_cast<Index>(rows.size());
  Matrix m(n, n);
  Index i = 0;
  for (const auto& r : rows) {
    if (static_cast<Index>(r.size()) != n) throw InvalidArgument("SquareMatrix: ragged rows");
    Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return SquareMatrix(std::move(m));
}

RectMatrix::RectMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() < 1 || m_.rows() > m_.cols()) {
    throw InvalidArgument("RectMatrix: need 1 <= rows <= cols");
  }
  if (!m_.allFinite()) throw InvalidArgument("RectMatrix: non-finite entry");
}

}  // namespace logdet
