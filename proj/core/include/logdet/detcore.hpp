#pragma once

#include "logdet/matrix.hpp"

#include <optional>
#include <vector>

namespace logdet {

struct SignedLogDet {
  int sign = 0;  // -1 or +1
  double log_abs = 0.0;
};

/// log|det A| by row-pivoted elimination. Throws SingularMatrix on an exact
/// zero pivot column.
double log_abs_det(const SquareMatrix& a);
SignedLogDet signed_log_det(const SquareMatrix& a);

/// Singular values, nonincreasing, by one-sided Jacobi rotations.
std::vector<double> singular_values(const SquareMatrix& a);

/// Largest singular value.
double operator_norm(const SquareMatrix& a);

/// Lower Cholesky factor of a symmetric positive-definite matrix, or nullopt
/// when a pivot is not safely positive.
std::optional<Matrix> cholesky_lower(const Matrix& spd);

/// Orthogonal projector onto the complement of the span of the first
/// `rank_deficit` rows.
struct ProjectionMatrix {
  Matrix p;
  Index rank_deficit = 0;

  Index n() const noexcept { return p.rows(); }
  double trace() const { return p.trace(); }
};

/// I - A_(i)^T (A_(i) A_(i)^T)^{-1} A_(i), 1 <= i <= n-1.
/// Throws DegenerateRows if the Gram matrix of the prefix is numerically singular.
ProjectionMatrix projection_matrix(const SquareMatrix& a, Index i);

/// Distances from each row to the span of the rows above it; gammas[0] is
/// the norm of the first row.
struct PerpSequence {
  std::vector<double> gammas;
  double log_sq_sum = 0.0;  // sum of log gamma_i^2
};

/// Perpendicular lengths plus the orthonormal basis built along the way
/// (row k of `basis` spans the new direction contributed by row k).
struct PerpBasis {
  PerpSequence lengths;
  Matrix basis;
};

/// Blocked Gram-Schmidt with one reorthogonalization pass. O(n^3).
/// Throws DegenerateRows when gamma_{i+1} < n * eps * |a_{i+1}|.
PerpSequence perpendicular_lengths(const SquareMatrix& a);
PerpBasis perpendicular_basis(const SquareMatrix& a);

/// a_{i+1}^T P_i a_{i+1}, evaluated through projection_matrix. Slow oracle
/// for perpendicular_lengths; same preconditions as projection_matrix.
double gamma_sq_via_projection(const SquareMatrix& a, Index i);

/// Last-row cofactors normalized to unit length, v_k = alpha_{nk} / Delta.
/// Uses minor determinants for n <= kCofactorMinorLimit and the rank-one
/// projector P_{n-1} = v v^T beyond that. Throws DegenerateRows if every
/// cofactor vanishes.
inline constexpr Index kCofactorMinorLimit = 8;
std::vector<double> cofactor_unit_vector(const SquareMatrix& a);

}  // namespace logdet
