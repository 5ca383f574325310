#include "logdet/resolvent.hpp"

#include "logdet/detcore.hpp"
#include "logdet/errors.hpp"
#include "logdet/parallel.hpp"
#include "logdet/rng.hpp"
#include "logdet/stats.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace logdet {
namespace {

// tr (M + alpha I)^{-1} for M = rows rows^T / n, via Cholesky: the trace of
// the inverse equals the squared Frobenius norm of L^{-1}.
double inverse_trace(const Matrix& rows, Index n, double alpha) {
  const Index p = rows.rows();
  Matrix g = rows * rows.transpose() / static_cast<double>(n);
  g.diagonal().array() += alpha;
  const auto l = cholesky_lower(g);
  if (!l) throw DegenerateRows("resolvent: regularized Gram matrix is not positive definite");
  Matrix inv = Matrix::Identity(p, p);
  l->triangularView<Eigen::Lower>().solveInPlace(inv);
  return inv.squaredNorm();
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("resolvent: need alpha > 0");
}

}  // namespace

double resolvent_trace(const RectMatrix& x, double alpha) {
  check_alpha(alpha);
  return inverse_trace(x.mat(), x.cols(), alpha) / static_cast<double>(x.cols());
}

double column_deletion_trace_gap(const RectMatrix& x, Index k, double alpha) {
  check_alpha(alpha);
  const Index n = x.cols();
  if (k < 0 || k >= n) throw InvalidArgument("column_deletion_trace_gap: column out of range");
  Matrix dropped(x.rows(), n - 1);
  dropped.leftCols(k) = x.mat().leftCols(k);
  dropped.rightCols(n - 1 - k) = x.mat().rightCols(n - 1 - k);
  return std::abs(inverse_trace(x.mat(), n, alpha) - inverse_trace(dropped, n, alpha));
}

double s_closed_form(double y, double alpha) {
  check_alpha(alpha);
  if (!(y >= 0.0 && y <= 1.0)) throw InvalidArgument("s_closed_form: need 0 <= y <= 1");
  const double b = alpha + 1.0 - y;
  return 2.0 / (b + std::sqrt(b * b + 4.0 * alpha * y));
}

std::pair<double, double> fixed_point_roots(double y, double alpha) {
  const double pos = s_closed_form(y, alpha);
  if (y == 0.0) return {pos, pos};
  const double b = alpha + 1.0 - y;
  const double neg = -(b + std::sqrt(b * b + 4.0 * alpha * y)) / (2.0 * y * alpha);
  return {pos, neg};
}

double fixed_point_residual(double s, double y, double alpha) {
  const double denom = 1.0 + alpha - y + y * alpha * s;
  if (denom == 0.0 || !std::isfinite(denom)) {
    throw InvalidArgument("fixed_point_residual: degenerate denominator");
  }
  return s - 1.0 / denom;
}

ResolventSummary resolvent_experiment(const EnsembleSpec& spec, Index p, double alpha, Index trials,
                                      int threads) {
  check_alpha(alpha);
  if (p < 1 || p > spec.n) throw InvalidArgument("resolvent_experiment: need 1 <= p <= n");
  if (trials < 2) throw InvalidArgument("resolvent_experiment: need trials >= 2");
  std::vector<double> traces(static_cast<std::size_t>(trials));
  parallel_for(trials, threads, [&](std::int64_t t) {
    EnsembleSpec trial = spec;
    trial.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(t));
    traces[static_cast<std::size_t>(t)] = resolvent_trace(sample_prefix(trial, p), alpha);
  });
  const StatReport report = moment_report(traces);
  ResolventSummary s;
  s.p = p;
  s.n = spec.n;
  s.alpha = alpha;
  s.empirical_mean = report.mean;
  s.empirical_var = report.variance;
  s.closed_form = s_closed_form(static_cast<double>(p) / static_cast<double>(spec.n), alpha);
  s.trials = trials;
  return s;
}

double default_alpha(Index n) {
  if (n < 1) throw InvalidArgument("default_alpha: need n >= 1");
  return std::pow(static_cast<double>(n), -1.0 / 6.0);
}

}  // namespace logdet
