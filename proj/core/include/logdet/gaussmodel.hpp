#pragma once

#include "logdet/matrix.hpp"

#include <cstdint>

namespace logdet {

/// One chi-square draw with k degrees of freedom (k >= 1), by inverse CDF.
double sample_chi_sq(int k, std::uint64_t seed);

/// Inverse CDF of chi-square(k) at u in (0, 1).
double chi_sq_quantile(int k, double u);

struct ChiSquareProductSample {
  Index n = 0;
  double log_det_abs = 0.0;  // (1/2) sum_{k=1}^n log chi2_k
};

/// Draw of log|det A_n| for Gaussian A_n through the product of independent
/// chi-squares with 1..n degrees of freedom. O(n).
ChiSquareProductSample chi_square_product_log_det(Index n, std::uint64_t seed);

/// Lower-bidiagonal D_n with independent chi entries: D(r, r) ~ chi_{n-r}
/// and, for r >= 1, D(r, r-1) ~ chi_{n-r} (0-based rows).
SquareMatrix tridiagonal_sample(Index n, std::uint64_t seed);

struct LogDetMoments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Exact mean and variance of log|det A_n| for Gaussian A_n.
LogDetMoments exact_log_det_moments(Index n);

/// sum_{k=1}^{s1} log(chi2_k / k) / sqrt(2 log n). s1 = 0 gives 0.
double tail_sum_statistic(Index n, Index s1, std::uint64_t seed);

/// Exact mean of tail_sum_statistic.
double tail_sum_mean(Index n, Index s1);

}  // namespace logdet
