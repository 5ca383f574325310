#include "logdet/gaussmodel.hpp"

#include "logdet/errors.hpp"
#include "logdet/rng.hpp"
#include "logdet/special.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <numbers>

namespace logdet {
namespace {

// Draw k of a stream lives at counter (k, 0).
double chi_sq_draw(const CounterStream& stream, Index k) {
  const auto b = stream.bits(static_cast<std::uint64_t>(k), 0);
  return chi_sq_quantile(static_cast<int>(k), to_open_unit(b[0]));
}

}  // namespace

double chi_sq_quantile(int k, double u) {
  if (k < 1) throw InvalidArgument("chi-square: need k >= 1");
  if (!(u > 0.0 && u < 1.0)) throw InvalidArgument("chi-square quantile: need u in (0,1)");
  return 2.0 * boost::math::gamma_p_inv(0.5 * k, u);
}

double sample_chi_sq(int k, std::uint64_t seed) {
  if (k < 1) throw InvalidArgument("sample_chi_sq: need k >= 1");
  return chi_sq_draw(CounterStream(seed), k);
}

ChiSquareProductSample chi_square_product_log_det(Index n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("chi_square_product_log_det: need n >= 1");
  const CounterStream stream(seed);
  double sum = 0.0;
  for (Index k = 1; k <= n; ++k) sum += std::log(chi_sq_draw(stream, k));
  return {n, 0.5 * sum};
}

SquareMatrix tridiagonal_sample(Index n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("tridiagonal_sample: need n >= 1");
  const CounterStream diag(derive_seed(seed, 0));
  const CounterStream sub(derive_seed(seed, 1));
  Matrix d = Matrix::Zero(n, n);
  for (Index r = 0; r < n; ++r) {
    d(r, r) = std::sqrt(chi_sq_draw(diag, n - r));
    if (r >= 1) d(r, r - 1) = std::sqrt(chi_sq_draw(sub, n - r));
  }
  return SquareMatrix(std::move(d));
}

LogDetMoments exact_log_det_moments(Index n) {
  if (n < 1) throw InvalidArgument("exact_log_det_moments: need n >= 1");
  double mean = 0.0;
  double var = 0.0;
  for (Index k = 1; k <= n; ++k) {
    const double half = 0.5 * static_cast<double>(k);
    mean += digamma(half) + std::numbers::ln2;
    var += trigamma(half);
  }
  return {0.5 * mean, 0.25 * var};
}

double tail_sum_statistic(Index n, Index s1, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("tail_sum_statistic: need n >= 2");
  if (s1 < 0 || s1 > n) throw InvalidArgument("tail_sum_statistic: need 0 <= s1 <= n");
  const CounterStream stream(seed);
  double sum = 0.0;
  for (Index k = 1; k <= s1; ++k) {
    sum += std::log(chi_sq_draw(stream, k) / static_cast<double>(k));
  }
  return sum / std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

double tail_sum_mean(Index n, Index s1) {
  if (n < 2) throw InvalidArgument("tail_sum_mean: need n >= 2");
  if (s1 < 0 || s1 > n) throw InvalidArgument("tail_sum_mean: need 0 <= s1 <= n");
  double sum = 0.0;
  for (Index k = 1; k <= s1; ++k) {
    const double kk = static_cast<double>(k);
    sum += digamma(0.5 * kk) + std::numbers::ln2 - std::log(kk);
  }
  return sum / std::sqrt(2.0 * std::log(static_cast<double>(n)));
}

}  // namespace logdet
