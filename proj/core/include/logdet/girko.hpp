#pragma once

#include "logdet/detcore.hpp"
#include "logdet/ensemble.hpp"
#include "logdet/matrix.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace logdet {

/// Q_i = P_i / (n - i). Step 0 uses Q_0 = I / n.
struct QMatrix {
  Matrix q;
  Index step = 0;

  Index n() const noexcept { return q.rows(); }
};

/// Requires 0 <= i <= n-1; inherits projection_matrix errors for i >= 1.
QMatrix q_matrix(const SquareMatrix& a, Index i);

/// Wraps an explicit scaled projector. Throws InvalidArgument if q is not
/// square or step is outside [0, n-1].
QMatrix make_q_matrix(Matrix q, Index step);

/// One martingale step: X = U + V with U the diagonal and V the
/// off-diagonal part of row^T Q row - 1, and the Taylor remainder
/// R = log(1+X) - X + X^2/2 (nullopt when X <= -1).
struct StepTerms {
  double x = 0.0;
  double u = 0.0;
  double v = 0.0;
  std::optional<double> r;
};

StepTerms decompose_step(const QMatrix& q, std::span<const double> next_row);

/// log(1+X) - X + X^2/2, or nullopt when X <= -1.
std::optional<double> taylor_remainder(double x);

/// Per-step terms for i in [0, n - s1) and the tail logs for i in [n - s1, n).
struct DecompositionTerms {
  Index n = 0;
  Index s1 = 0;
  std::vector<double> gamma_sq;  // all n steps
  std::vector<double> x, u, v;   // n - s1 entries
  std::vector<std::optional<double>> r;
  std::vector<double> tail_logs;  // s1 entries: log(gamma^2 / (n - i))
  Index flagged_steps = 0;        // steps with X <= -1

  Index head_size() const noexcept { return n - s1; }
};

/// Requires 1 <= s1 <= n-1.
DecompositionTerms full_decomposition(const SquareMatrix& a, Index s1);

/// (log|det A| - log((n-1)!)/2) / sqrt(log(n)/2). Requires n >= 2.
double normalized_statistic(const SquareMatrix& a);
double normalize_log_abs_det(double log_abs_det, Index n);

struct PartialSums {
  double s_x = 0.0;
  double s_x2_centered = 0.0;
  std::optional<double> s_r;  // unavailable if any step was flagged
  double s_tail = 0.0;

  /// S_X - S_X2 + S_R + S_tail, which equals normalized_statistic.
  std::optional<double> reconstructed() const;
};

PartialSums partial_sums(const DecompositionTerms& terms);

/// floor(log(n)^(3a)) clamped to [1, n-1]. Requires n >= 2, a > 0.
Index default_s1(Index n, double a);
/// floor(n * log(n)^(-20a)) clamped to [1, n-1]; diagnostic only.
Index default_s2(Index n, double a);

/// Largest diagonal entry of a projector (the max_k p_kk(i) diagnostic).
double max_projection_diagonal(const ProjectionMatrix& p);

/// E[X^2 | previous rows] = 2/(n-i) + (nu4 - 3) sum_k q_kk^2.
double cond_second_moment(const QMatrix& q, double nu4);

/// Var(V) = 2 sum_{u != v} q_uv^2.
double offdiag_variance(const QMatrix& q);

struct QuarticMoments {
  double diag4_hat = 0.0;     // E |sum_i m_ii (x_i^2 - 1)|^4, Monte Carlo
  double offdiag4_hat = 0.0;  // E |sum_{u != v} m_uv x_u x_v|^4, Monte Carlo
  double diag4_se = 0.0;
  double offdiag4_se = 0.0;
  double bound_diag = 0.0;  // nu8 tr M^4 + (nu4 tr M^2)^2
  double bound_off = 0.0;   // nu4^2 (tr M^2)^2
};

/// Throws InvalidArgument if m is not square and exactly symmetric, or trials < 2.
QuarticMoments quartic_form_moments(const Matrix& m, const EntryDistribution& dist, Index trials,
                                    std::uint64_t seed);

/// |R(X)| <= C (U^2 + |V|^(2+delta)) log log n. Requires X > -1.
bool remainder_bound_check(double u, double v, double x, double delta, double c, Index n);

/// X < -1 + log(n)^(-a/2).
bool lower_tail_indicator(double x, Index n, double a);

}  // namespace logdet
