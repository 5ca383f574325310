#include "logdet/special.hpp"

#include "logdet/errors.hpp"

#include <cmath>

namespace logdet {
namespace {

constexpr double kAsymptoticStart = 10.0;

}  // namespace

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("digamma: need finite x > 0");
  double shift = 0.0;
  while (x < kAsymptoticStart) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  // psi(x) ~ log x - 1/(2x) - sum B_2k / (2k x^2k)
  const double z = 1.0 / (x * x);
  const double series =
      z * (1.0 / 12 -
           z * (1.0 / 120 -
                z * (1.0 / 252 -
                     z * (1.0 / 240 - z * (1.0 / 132 - z * (691.0 / 32760 - z / 12.0))))));
  return shift + std::log(x) - 0.5 / x - series;
}

double trigamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw InvalidArgument("trigamma: need finite x > 0");
  double shift = 0.0;
  while (x < kAsymptoticStart) {
    shift += 1.0 / (x * x);
    x += 1.0;
  }
  // psi'(x) ~ 1/x + 1/(2x^2) + sum B_2k / x^(2k+1)
  const double z = 1.0 / (x * x);
  const double series =
      z * (1.0 / 6 -
           z * (1.0 / 30 - z * (1.0 / 42 - z * (1.0 / 30 - z * (5.0 / 66 - z * (691.0 / 2730 - z * 7.0 / 6))))));
  return shift + 1.0 / x + 0.5 * z + series / x;
}

}  // namespace logdet
