#include "logdet/detcore.hpp"

#include "logdet/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace logdet {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr Index kGramSchmidtBlock = 64;

// Row tolerance shared by the Gram-Schmidt kernel and the projection oracle:
// a row is degenerate when its perpendicular is below n * eps of its norm.
double rank_tolerance(Index n) { return static_cast<double>(n) * kEps; }

}  // namespace

SignedLogDet signed_log_det(const SquareMatrix& a) {
  Matrix m = a.mat();
  const Index n = m.rows();
  SignedLogDet out{1, 0.0};
  for (Index k = 0; k < n; ++k) {
    Index pivot = k;
    double best = std::abs(m(k, k));
    for (Index r = k + 1; r < n; ++r) {
      const double v = std::abs(m(r, k));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) throw SingularMatrix("log_abs_det: zero pivot column");
    if (pivot != k) {
      m.row(k).swap(m.row(pivot));
      out.sign = -out.sign;
    }
    const double d = m(k, k);
    if (d < 0.0) out.sign = -out.sign;
    out.log_abs += std::log(std::abs(d));
    const Index rest = n - k - 1;
    for (Index r = k + 1; r < n; ++r) {
      const double f = m(r, k) / d;
      if (f != 0.0) m.row(r).tail(rest) -= f * m.row(k).tail(rest);
    }
  }
  return out;
}

double log_abs_det(const SquareMatrix& a) { return signed_log_det(a).log_abs; }

std::vector<double> singular_values(const SquareMatrix& a) {
  // One-sided Jacobi on the rows: rotate row pairs until mutually
  // orthogonal; the row norms are then the singular values.
  Matrix w = a.mat();
  const Index n = w.rows();
  const double tol = std::sqrt(static_cast<double>(n)) * kEps;
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Index p = 0; p + 1 < n; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double alpha = w.row(p).squaredNorm();
        const double beta = w.row(q).squaredNorm();
        const double gamma = w.row(p).dot(w.row(q));
        if (alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::hypot(1.0, zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Eigen::RowVectorXd wp = w.row(p);
        w.row(p) = c * wp - s * w.row(q);
        w.row(q) = s * wp + c * w.row(q);
      }
    }
    if (!rotated) break;
  }
  std::vector<double> sv(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) sv[static_cast<std::size_t>(i)] = w.row(i).norm();
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

double operator_norm(const SquareMatrix& a) { return singular_values(a).front(); }

std::optional<Matrix> cholesky_lower(const Matrix& spd) {
  const Index n = spd.rows();
  Matrix l = Matrix::Zero(n, n);
  const double tol = rank_tolerance(n);
  for (Index j = 0; j < n; ++j) {
    for (Index k = 0; k < j; ++k) {
      l(j, k) = (spd(j, k) - l.row(j).head(k).dot(l.row(k).head(k))) / l(k, k);
    }
    const double d = spd(j, j) - l.row(j).head(j).squaredNorm();
    if (!(d > tol * spd(j, j))) return std::nullopt;
    l(j, j) = std::sqrt(d);
  }
  return l;
}

ProjectionMatrix projection_matrix(const SquareMatrix& a, Index i) {
  const Index n = a.n();
  if (i < 1 || i > n - 1) throw InvalidArgument("projection_matrix: need 1 <= i <= n-1");
  const auto rows = a.mat().topRows(i);
  const Matrix gram = rows * rows.transpose();
  const auto l = cholesky_lower(gram);
  if (!l) throw DegenerateRows("projection_matrix: Gram matrix of the row prefix is singular");
  const Matrix w = l->triangularView<Eigen::Lower>().solve(rows);
  Matrix p = Matrix::Identity(n, n) - w.transpose() * w;
  // Force exact symmetry.
  const Matrix pt = p.transpose();
  p = 0.5 * (p + pt);
  return {std::move(p), i};
}

PerpBasis perpendicular_basis(const SquareMatrix& a) {
  const Matrix& m = a.mat();
  const Index n = m.rows();
  const double tol = rank_tolerance(n);
  PerpBasis out;
  out.basis.resize(n, n);
  out.lengths.gammas.resize(static_cast<std::size_t>(n));
  Matrix& q = out.basis;

  for (Index i0 = 0; i0 < n; i0 += kGramSchmidtBlock) {
    const Index bs = std::min(kGramSchmidtBlock, n - i0);
    Matrix block = m.middleRows(i0, bs);
    if (i0 > 0) {
      const auto done = q.topRows(i0);
      for (int pass = 0; pass < 2; ++pass) {
        const Matrix coeff = block * done.transpose();
        block.noalias() -= coeff * done;
      }
    }
    for (Index r = 0; r < bs; ++r) {
      auto w = block.row(r);
      for (int pass = 0; pass < 2; ++pass) {
        for (Index j = 0; j < r; ++j) {
          const auto qj = q.row(i0 + j);
          w -= qj.dot(w) * qj;
        }
      }
      const double gamma = w.norm();
      const double row_norm = m.row(i0 + r).norm();
      if (!(gamma > tol * row_norm)) {
        throw DegenerateRows("perpendicular_lengths: row " + std::to_string(i0 + r + 1) +
                             " lies in the span of the rows above it");
      }
      q.row(i0 + r) = w / gamma;
      out.lengths.gammas[static_cast<std::size_t>(i0 + r)] = gamma;
    }
  }
  double s = 0.0;
  for (double g : out.lengths.gammas) s += 2.0 * std::log(g);
  out.lengths.log_sq_sum = s;
  return out;
}

PerpSequence perpendicular_lengths(const SquareMatrix& a) {
  return perpendicular_basis(a).lengths;
}

double gamma_sq_via_projection(const SquareMatrix& a, Index i) {
  const ProjectionMatrix p = projection_matrix(a, i);
  const auto row = a.mat().row(i);
  const double value = row.dot(p.p * row.transpose());
  const double floor = rank_tolerance(a.n());
  if (!(value > floor * floor * row.squaredNorm())) {
    throw DegenerateRows("gamma_sq_via_projection: row lies in the span of the prefix");
  }
  return value;
}

std::vector<double> cofactor_unit_vector(const SquareMatrix& a) {
  const Index n = a.n();
  if (n == 1) return {1.0};
  std::vector<double> v(static_cast<std::size_t>(n));

  if (n <= kCofactorMinorLimit) {
    // Signed minors of the last row, rescaled by the largest magnitude so
    // that exponentiation cannot overflow.
    std::vector<SignedLogDet> minors(static_cast<std::size_t>(n));
    double top = -std::numeric_limits<double>::infinity();
    for (Index k = 0; k < n; ++k) {
      Matrix minor(n - 1, n - 1);
      minor.leftCols(k) = a.mat().topRows(n - 1).leftCols(k);
      minor.rightCols(n - 1 - k) = a.mat().topRows(n - 1).rightCols(n - 1 - k);
      SignedLogDet d{0, -std::numeric_limits<double>::infinity()};
      try {
        d = signed_log_det(SquareMatrix(std::move(minor)));
      } catch (const SingularMatrix&) {
      }
      if (((n - 1 + k) % 2) == 1) d.sign = -d.sign;
      minors[static_cast<std::size_t>(k)] = d;
      top = std::max(top, d.log_abs);
    }
    if (!std::isfinite(top)) throw DegenerateRows("cofactor_unit_vector: all cofactors vanish");
    double norm_sq = 0.0;
    for (Index k = 0; k < n; ++k) {
      const auto& d = minors[static_cast<std::size_t>(k)];
      const double value = d.sign == 0 ? 0.0 : d.sign * std::exp(d.log_abs - top);
      v[static_cast<std::size_t>(k)] = value;
      norm_sq += value * value;
    }
    const double norm = std::sqrt(norm_sq);
    for (double& x : v) x /= norm;
    return v;
  }

  // P_{n-1} = v v^T: take its heaviest column, then fix the sign so that
  // det of A with its last row replaced by v (= Delta |v|^2) is positive.
  const ProjectionMatrix p = projection_matrix(a, n - 1);
  Index heaviest = 0;
  p.p.diagonal().maxCoeff(&heaviest);
  Vector col = p.p.col(heaviest);
  col /= col.norm();
  Matrix probe = a.mat();
  probe.row(n - 1) = col.transpose();
  if (signed_log_det(SquareMatrix(std::move(probe))).sign < 0) col = -col;
  for (Index k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = col(k);
  return v;
}

}  // namespace logdet
