#pragma once

#include <functional>
#include <span>
#include <vector>

namespace logdet {

/// Standard normal CDF.
double normal_cdf(double x);

/// One-sample Kolmogorov-Smirnov distance. `sorted` must be nonempty and
/// nondecreasing.
double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf);

/// Sup distance between two empirical CDFs (inputs need not be sorted).
double two_sample_ks(std::span<const double> a, std::span<const double> b);

/// Asymptotic two-sample critical value c(alpha) sqrt((n1+n2)/(n1 n2));
/// c(0.01) = 1.628, c(0.05) = 1.358.
double ks_critical_value(std::size_t n1, std::size_t n2, double alpha = 0.01);

/// L_m = D_m^{-3/2} sum E|Z_j|^3 with D_m = sum sigma_j^2.
double berry_esseen_ratio(std::span<const double> variances,
                          std::span<const double> third_abs_moments);

/// For a unit vector v: sum |v_k|^3 and max |v_k| (the first never exceeds the second).
struct CofactorBoundProxy {
  double sum_abs_cubed = 0.0;
  double max_abs = 0.0;
};
CofactorBoundProxy cofactor_bound_proxy(std::span<const double> unit_vector);

struct StatReport {
  std::size_t sample_size = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double ks_to_standard_normal = 0.0;
  double se_mean = 0.0;
  double se_variance = 0.0;
  double se_skewness = 0.0;
  double se_excess_kurtosis = 0.0;
  bool degenerate = false;  // zero variance; shape moments reported as 0
};

/// Requires sample size >= 2. Standard errors are leave-one-out jackknife.
StatReport moment_report(std::span<const double> sample);

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

}  // namespace logdet
