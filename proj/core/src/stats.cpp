#include "logdet/stats.hpp"

#include "logdet/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace logdet {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_statistic(std::span<const double> sorted, const std::function<double(double)>& cdf) {
  if (sorted.empty()) throw InvalidArgument("ks_statistic: empty sample");
  if (!std::is_sorted(sorted.begin(), sorted.end())) {
    throw InvalidArgument("ks_statistic: sample must be sorted");
  }
  const double m = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / m;
    const double below = static_cast<double>(i) / m;
    d = std::max({d, std::abs(above - f), std::abs(below - f)});
  }
  return d;
}

double two_sample_ks(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("two_sample_ks: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (i == x.size()) {
      v = y[j];
    } else if (j == y.size()) {
      v = x[i];
    } else {
      v = std::min(x[i], y[j]);
    }
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double ks_critical_value(std::size_t n1, std::size_t n2, double alpha) {
  if (n1 == 0 || n2 == 0) throw InvalidArgument("ks_critical_value: empty sample");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("ks_critical_value: alpha in (0,1)");
  const double c = std::sqrt(-0.5 * std::log(0.5 * alpha));
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  return c * std::sqrt((a + b) / (a * b));
}

double berry_esseen_ratio(std::span<const double> variances,
                          std::span<const double> third_abs_moments) {
  if (variances.size() != third_abs_moments.size()) {
    throw InvalidArgument("berry_esseen_ratio: length mismatch");
  }
  double total_var = 0.0;
  double total_third = 0.0;
  for (std::size_t j = 0; j < variances.size(); ++j) {
    const double v = variances[j];
    if (!(v > 0.0)) throw InvalidArgument("berry_esseen_ratio: variances must be positive");
    const double sigma3 = v * std::sqrt(v);
    if (third_abs_moments[j] < sigma3 * (1.0 - 1e-12)) {
      throw InvalidArgument("berry_esseen_ratio: third absolute moment below sigma^3");
    }
    total_var += v;
    total_third += third_abs_moments[j];
  }
  if (!(total_var > 0.0)) throw InvalidArgument("berry_esseen_ratio: D_m must be positive");
  return total_third / (total_var * std::sqrt(total_var));
}

CofactorBoundProxy cofactor_bound_proxy(std::span<const double> unit_vector) {
  CofactorBoundProxy p;
  for (double v : unit_vector) {
    const double a = std::abs(v);
    p.sum_abs_cubed += a * a * a;
    p.max_abs = std::max(p.max_abs, a);
  }
  return p;
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

StatReport moment_report(std::span<const double> sample) {
  const std::size_t m = sample.size();
  if (m < 2) throw InvalidArgument("moment_report: need at least 2 values");
  const double mm = static_cast<double>(m);
  StatReport r;
  r.sample_size = m;
  r.mean = compensated_sum(sample) / mm;

  // Power sums of the centered sample; leave-one-out moments follow by
  // subtracting a single term, so the jackknife costs O(m).
  std::vector<double> c1(m), c2(m), c3(m), c4(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double c = sample[i] - r.mean;
    c1[i] = c;
    c2[i] = c * c;
    c3[i] = c2[i] * c;
    c4[i] = c2[i] * c2[i];
  }
  const double s1 = compensated_sum(c1);
  const double s2 = compensated_sum(c2);
  const double s3 = compensated_sum(c3);
  const double s4 = compensated_sum(c4);

  const double m2 = s2 / mm - (s1 / mm) * (s1 / mm);
  r.variance = std::max(0.0, m2) * mm / (mm - 1.0);
  r.se_mean = std::sqrt(r.variance / mm);

  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  r.ks_to_standard_normal = ks_statistic(sorted, normal_cdf);

  if (!(m2 > 0.0)) {
    r.degenerate = true;
    return r;
  }
  r.skewness = (s3 / mm) / std::pow(m2, 1.5);
  r.excess_kurtosis = (s4 / mm) / (m2 * m2) - 3.0;

  constexpr double kUnknown = std::numeric_limits<double>::infinity();
  if (m < 4) {
    r.se_variance = r.se_skewness = r.se_excess_kurtosis = kUnknown;
    return r;
  }
  const double k = mm - 1.0;
  std::vector<double> var_loo(m), skew_loo(m), kurt_loo(m);
  bool shape_ok = true;
  for (std::size_t i = 0; i < m; ++i) {
    const double t1 = s1 - c1[i];
    const double t2 = s2 - c2[i];
    const double t3 = s3 - c3[i];
    const double t4 = s4 - c4[i];
    const double mu = t1 / k;
    const double mom2 = t2 / k - mu * mu;
    const double mom3 = t3 / k - 3.0 * mu * t2 / k + 2.0 * mu * mu * mu;
    const double mom4 = t4 / k - 4.0 * mu * t3 / k + 6.0 * mu * mu * t2 / k - 3.0 * mu * mu * mu * mu;
    var_loo[i] = mom2 * k / (k - 1.0);
    if (mom2 > 0.0) {
      skew_loo[i] = mom3 / std::pow(mom2, 1.5);
      kurt_loo[i] = mom4 / (mom2 * mom2) - 3.0;
    } else {
      shape_ok = false;
    }
  }
  const auto jackknife_se = [&](const std::vector<double>& loo) {
    const double centre = compensated_sum(loo) / mm;
    double ss = 0.0;
    for (double v : loo) ss += (v - centre) * (v - centre);
    return std::sqrt((mm - 1.0) / mm * ss);
  };
  r.se_variance = jackknife_se(var_loo);
  r.se_skewness = shape_ok ? jackknife_se(skew_loo) : kUnknown;
  r.se_excess_kurtosis = shape_ok ? jackknife_se(kurt_loo) : kUnknown;
  return r;
}

}  // namespace logdet
