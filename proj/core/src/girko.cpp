#include "logdet/girko.hpp"

#include "logdet/errors.hpp"
#include "logdet/rng.hpp"
#include "logdet/stats.hpp"

#include <algorithm>
#include <cmath>

namespace logdet {
namespace {

// Diagonal part sum_k m_kk (a_k^2 - 1) and off-diagonal part of row^T M row.
std::pair<double, double> diag_offdiag_parts(const Matrix& p,
                                             const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  double u = 0.0;
  double diag_quad = 0.0;
  for (Index k = 0; k < row.size(); ++k) {
    const double a2 = row(k) * row(k);
    u += p(k, k) * (a2 - 1.0);
    diag_quad += p(k, k) * a2;
  }
  const double full_quad = row.dot(p * row.transpose());
  return {u, full_quad - diag_quad};
}

double sqrt_two_log(Index n) { return std::sqrt(2.0 * std::log(static_cast<double>(n))); }

}  // namespace

QMatrix make_q_matrix(Matrix q, Index step) {
  if (q.rows() != q.cols() || q.rows() == 0) throw InvalidArgument("QMatrix: must be square");
  if (step < 0 || step > q.rows() - 1) throw InvalidArgument("QMatrix: step outside [0, n-1]");
  return {std::move(q), step};
}

QMatrix q_matrix(const SquareMatrix& a, Index i) {
  const Index n = a.n();
  if (i < 0 || i > n - 1) throw InvalidArgument("q_matrix: need 0 <= i <= n-1");
  if (i == 0) return {Matrix::Identity(n, n) / static_cast<double>(n), 0};
  ProjectionMatrix p = projection_matrix(a, i);
  return {p.p / static_cast<double>(n - i), i};
}

std::optional<double> taylor_remainder(double x) {
  if (!(x > -1.0)) return std::nullopt;
  return std::log1p(x) - x + 0.5 * x * x;
}

StepTerms decompose_step(const QMatrix& q, std::span<const double> next_row) {
  if (static_cast<Index>(next_row.size()) != q.n()) {
    throw InvalidArgument("decompose_step: row length does not match Q");
  }
  const Eigen::Map<const Eigen::RowVectorXd> row(next_row.data(), q.n());
  if (!row.allFinite()) throw InvalidArgument("decompose_step: non-finite row");
  const auto [u, v] = diag_offdiag_parts(q.q, row);
  StepTerms t;
  t.u = u;
  t.v = v;
  t.x = u + v;
  t.r = taylor_remainder(t.x);
  return t;
}

DecompositionTerms full_decomposition(const SquareMatrix& a, Index s1) {
  const Index n = a.n();
  if (s1 < 1 || s1 > n - 1) throw InvalidArgument("full_decomposition: need 1 <= s1 <= n-1");
  const PerpBasis pb = perpendicular_basis(a);

  DecompositionTerms t;
  t.n = n;
  t.s1 = s1;
  t.gamma_sq.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const double g = pb.lengths.gammas[static_cast<std::size_t>(i)];
    t.gamma_sq[static_cast<std::size_t>(i)] = g * g;
  }

  const Index head = n - s1;
  t.x.reserve(static_cast<std::size_t>(head));
  t.u.reserve(static_cast<std::size_t>(head));
  t.v.reserve(static_cast<std::size_t>(head));
  t.r.reserve(static_cast<std::size_t>(head));
  // With P_i = I - sum_{j<i} b_j b_j^T over the orthonormal basis rows b_j:
  // a^T P_i a = |a|^2 - sum_{j<i} (b_j . a)^2 and p_kk(i) = 1 - sum_{j<i} b_jk^2.
  // One GEMM gives every inner product, so the quadratic form is evaluated
  // independently of the Gram-Schmidt residual that produced gamma.
  const Matrix coeffs = a.mat() * pb.basis.transpose();
  Eigen::VectorXd p_diag = Eigen::VectorXd::Ones(n);
  for (Index i = 0; i < head; ++i) {
    if (i > 0) p_diag -= pb.basis.row(i - 1).transpose().cwiseAbs2();
    const auto row = a.mat().row(i);
    const double dim = static_cast<double>(n - i);
    const double x = t.gamma_sq[static_cast<std::size_t>(i)] / dim - 1.0;
    double u = 0.0;
    double diag_quad = 0.0;
    for (Index k = 0; k < n; ++k) {
      const double a2 = row(k) * row(k);
      u += p_diag(k) * (a2 - 1.0);
      diag_quad += p_diag(k) * a2;
    }
    const double full_quad = row.squaredNorm() - coeffs.row(i).head(i).squaredNorm();
    t.x.push_back(x);
    t.u.push_back(u / dim);
    t.v.push_back((full_quad - diag_quad) / dim);
    t.r.push_back(taylor_remainder(x));
    if (!t.r.back()) ++t.flagged_steps;
  }
  t.tail_logs.reserve(static_cast<std::size_t>(s1));
  for (Index i = head; i < n; ++i) {
    t.tail_logs.push_back(std::log(t.gamma_sq[static_cast<std::size_t>(i)] /
                                   static_cast<double>(n - i)));
  }
  return t;
}

double normalize_log_abs_det(double log_abs_det, Index n) {
  if (n < 2) throw InvalidArgument("normalized_statistic: need n >= 2");
  const double nn = static_cast<double>(n);
  return (log_abs_det - 0.5 * std::lgamma(nn)) / std::sqrt(0.5 * std::log(nn));
}

double normalized_statistic(const SquareMatrix& a) {
  if (a.n() < 2) throw InvalidArgument("normalized_statistic: need n >= 2");
  return normalize_log_abs_det(log_abs_det(a), a.n());
}

std::optional<double> PartialSums::reconstructed() const {
  if (!s_r) return std::nullopt;
  return s_x - s_x2_centered + *s_r + s_tail;
}

PartialSums partial_sums(const DecompositionTerms& terms) {
  if (terms.n < 2) throw InvalidArgument("partial_sums: need n >= 2");
  const double scale = sqrt_two_log(terms.n);
  const double log_n = std::log(static_cast<double>(terms.n));
  std::vector<double> half_sq(terms.x.size());
  for (std::size_t i = 0; i < terms.x.size(); ++i) half_sq[i] = 0.5 * terms.x[i] * terms.x[i];

  PartialSums s;
  s.s_x = compensated_sum(terms.x) / scale;
  s.s_x2_centered = (compensated_sum(half_sq) - log_n) / scale;
  s.s_tail = compensated_sum(terms.tail_logs) / scale;
  if (terms.flagged_steps == 0) {
    std::vector<double> r(terms.r.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = *terms.r[i];
    s.s_r = compensated_sum(r) / scale;
  }
  return s;
}

Index default_s1(Index n, double a) {
  if (n < 2 || !(a > 0.0)) throw InvalidArgument("default_s1: need n >= 2 and a > 0");
  const double raw = std::floor(std::pow(std::log(static_cast<double>(n)), 3.0 * a));
  return static_cast<Index>(std::clamp(raw, 1.0, static_cast<double>(n - 1)));
}

Index default_s2(Index n, double a) {
  if (n < 2 || !(a > 0.0)) throw InvalidArgument("default_s2: need n >= 2 and a > 0");
  const double nn = static_cast<double>(n);
  const double raw = std::floor(nn * std::pow(std::log(nn), -20.0 * a));
  return static_cast<Index>(std::clamp(raw, 1.0, nn - 1.0));
}

double max_projection_diagonal(const ProjectionMatrix& p) { return p.p.diagonal().maxCoeff(); }

double cond_second_moment(const QMatrix& q, double nu4) {
  const double dim = static_cast<double>(q.n() - q.step);
  return 2.0 / dim + (nu4 - 3.0) * q.q.diagonal().squaredNorm();
}

double offdiag_variance(const QMatrix& q) {
  return 2.0 * (q.q.squaredNorm() - q.q.diagonal().squaredNorm());
}

QuarticMoments quartic_form_moments(const Matrix& m, const EntryDistribution& dist, Index trials,
                                    std::uint64_t seed) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidArgument("quartic_form_moments: M must be square");
  }
  if (m != m.transpose()) throw InvalidArgument("quartic_form_moments: M must be symmetric");
  if (trials < 2) throw InvalidArgument("quartic_form_moments: need trials >= 2");

  const Index n = m.rows();
  const CounterStream stream(seed);
  std::vector<double> diag4(static_cast<std::size_t>(trials));
  std::vector<double> off4(static_cast<std::size_t>(trials));
  Eigen::RowVectorXd x(n);
  for (Index t = 0; t < trials; ++t) {
    for (Index k = 0; k < n; ++k) {
      const auto u = stream.uniforms(static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(k));
      x(k) = draw_entry(dist, u[0], u[1]);
    }
    const auto [d, o] = diag_offdiag_parts(m, x);
    diag4[static_cast<std::size_t>(t)] = std::pow(d, 4);
    off4[static_cast<std::size_t>(t)] = std::pow(o, 4);
  }
  const StatReport rd = moment_report(diag4);
  const StatReport ro = moment_report(off4);

  const Matrix m2 = m * m;
  const double tr2 = m2.trace();
  const double tr4 = (m2 * m2).trace();
  const double nu4 = fourth_moment(dist);
  const double nu8 = eighth_moment(dist);

  QuarticMoments out;
  out.diag4_hat = rd.mean;
  out.offdiag4_hat = ro.mean;
  out.diag4_se = rd.se_mean;
  out.offdiag4_se = ro.se_mean;
  out.bound_diag = nu8 * tr4 + (nu4 * tr2) * (nu4 * tr2);
  out.bound_off = nu4 * nu4 * tr2 * tr2;
  return out;
}

bool remainder_bound_check(double u, double v, double x, double delta, double c, Index n) {
  if (!(x > -1.0)) throw InvalidArgument("remainder_bound_check: need X > -1");
  if (!(delta >= 0.0 && delta <= 1.0)) throw InvalidArgument("remainder_bound_check: delta in [0,1]");
  if (n < 3) throw InvalidArgument("remainder_bound_check: need n >= 3");
  const double r = std::abs(*taylor_remainder(x));
  const double loglog = std::log(std::log(static_cast<double>(n)));
  return r <= c * (u * u + std::pow(std::abs(v), 2.0 + delta)) * loglog;
}

bool lower_tail_indicator(double x, Index n, double a) {
  if (n < 2) throw InvalidArgument("lower_tail_indicator: need n >= 2");
  return x < -1.0 + std::pow(std::log(static_cast<double>(n)), -0.5 * a);
}

}  // namespace logdet
