#pragma once

#include "logdet/ensemble.hpp"
#include "logdet/matrix.hpp"

#include <utility>

namespace logdet {

/// (1/n) tr (X X^T / n + alpha I_p)^{-1} for a p x n block. Requires alpha > 0.
double resolvent_trace(const RectMatrix& x, double alpha);

/// |tr G(alpha) - tr G_(k)(alpha)| where G_(k) drops column k of X.
/// Unnormalized traces; bounded by 1/alpha.
double column_deletion_trace_gap(const RectMatrix& x, Index k, double alpha);

/// 2 / (alpha + 1 - y + sqrt((alpha + 1 - y)^2 + 4 alpha y)), the
/// deterministic limit of the normalized trace at aspect ratio y = p/n.
/// Requires 0 <= y <= 1, alpha > 0.
double s_closed_form(double y, double alpha);

/// Both roots of y alpha s^2 + (1 + alpha - y) s - 1 = 0 as (positive, negative).
/// At y = 0 the equation is linear and both entries hold 1/(1+alpha).
std::pair<double, double> fixed_point_roots(double y, double alpha);

/// s - 1 / (1 + alpha - y + y alpha s).
double fixed_point_residual(double s, double y, double alpha);

struct ResolventSummary {
  Index p = 0;
  Index n = 0;
  double alpha = 0.0;
  double empirical_mean = 0.0;
  double empirical_var = 0.0;
  double closed_form = 0.0;
  Index trials = 0;
};

/// Monte Carlo over `trials` independent p x n prefixes; trial t uses
/// derive_seed(spec.seed, t). Requires 1 <= p <= n, trials >= 2.
ResolventSummary resolvent_experiment(const EnsembleSpec& spec, Index p, double alpha, Index trials,
                                      int threads = 1);

/// n^(-1/6), the default regularization.
double default_alpha(Index n);

}  // namespace logdet
