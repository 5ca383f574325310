#include "logdet/ensemble.hpp"

#include "logdet/errors.hpp"
#include "logdet/rng.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

namespace logdet {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

double two_point_high(double p) { return std::sqrt((1.0 - p) / p); }
double two_point_low(double p) { return -std::sqrt(p / (1.0 - p)); }

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("TwoPointAsym: p must lie in (0, 1)");
}

Matrix draw_block(const EntryDistribution& dist, std::uint64_t seed, Index row0, Index rows,
                  Index cols) {
  const CounterStream stream(seed);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const auto u = stream.uniforms(static_cast<std::uint64_t>(row0 + i),
                                     static_cast<std::uint64_t>(j));
      m(i, j) = draw_entry(dist, u[0], u[1]);
    }
  }
  return m;
}

}  // namespace

double fourth_moment(const EntryDistribution& dist) {
  return std::visit(Overloaded{
                        [](StandardGaussian) { return 3.0; },
                        [](Rademacher) { return 1.0; },
                        [](UniformSqrt3) { return 9.0 / 5.0; },
                        [](TwoPointAsym d) {
                          check_p(d.p);
                          const double q = 1.0 - d.p;
                          return (q * q * q + d.p * d.p * d.p) / (d.p * q);
                        },
                        [](StandardizedExponential) { return 9.0; },
                    },
                    dist);
}

double third_abs_moment(const EntryDistribution& dist) {
  return std::visit(Overloaded{
                        [](StandardGaussian) { return 2.0 * std::sqrt(2.0 / std::numbers::pi); },
                        [](Rademacher) { return 1.0; },
                        [](UniformSqrt3) { return 3.0 * std::sqrt(3.0) / 4.0; },
                        [](TwoPointAsym d) {
                          check_p(d.p);
                          const double hi = two_point_high(d.p);
                          const double lo = -two_point_low(d.p);
                          return d.p * hi * hi * hi + (1.0 - d.p) * lo * lo * lo;
                        },
                        // int_0^inf |x-1|^3 e^-x dx
                        [](StandardizedExponential) { return 12.0 / std::numbers::e - 2.0; },
                    },
                    dist);
}

double eighth_moment(const EntryDistribution& dist) {
  return std::visit(Overloaded{
                        [](StandardGaussian) { return 105.0; },
                        [](Rademacher) { return 1.0; },
                        [](UniformSqrt3) { return 9.0; },
                        [](TwoPointAsym d) {
                          check_p(d.p);
                          return d.p * std::pow(two_point_high(d.p), 8) +
                                 (1.0 - d.p) * std::pow(two_point_low(d.p), 8);
                        },
                        // central moments of Exp(1) are the derangement numbers
                        [](StandardizedExponential) { return 14833.0; },
                    },
                    dist);
}

double draw_entry(const EntryDistribution& dist, double u1, double u2) {
  return std::visit(
      Overloaded{
          [&](StandardGaussian) {
            return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
          },
          [&](Rademacher) { return u1 < 0.5 ? -1.0 : 1.0; },
          [&](UniformSqrt3) { return std::sqrt(3.0) * (2.0 * u1 - 1.0); },
          [&](TwoPointAsym d) { return u1 < d.p ? two_point_high(d.p) : two_point_low(d.p); },
          [&](StandardizedExponential) { return -std::log(u1) - 1.0; },
      },
      dist);
}

std::string to_string(const EntryDistribution& dist) {
  return std::visit(Overloaded{
                        [](StandardGaussian) -> std::string { return "gaussian"; },
                        [](Rademacher) -> std::string { return "rademacher"; },
                        [](UniformSqrt3) -> std::string { return "uniform"; },
                        [](TwoPointAsym d) -> std::string {
                          char buf[32];
                          const auto res = std::to_chars(buf, buf + sizeof buf, d.p);
                          return "twopoint:" + std::string(buf, res.ptr);
                        },
                        [](StandardizedExponential) -> std::string { return "exponential"; },
                    },
                    dist);
}

EntryDistribution parse_distribution(const std::string& name) {
  if (name == "gaussian") return StandardGaussian{};
  if (name == "rademacher") return Rademacher{};
  if (name == "uniform") return UniformSqrt3{};
  if (name == "exponential") return StandardizedExponential{};
  if (name.rfind("twopoint:", 0) == 0) {
    double p = 0.0;
    try {
      std::size_t used = 0;
      p = std::stod(name.substr(9), &used);
      if (used != name.size() - 9) throw InvalidArgument("");
    } catch (const std::exception&) {
      throw InvalidArgument("bad two-point parameter in '" + name + "'");
    }
    check_p(p);
    return TwoPointAsym{p};
  }
  throw InvalidArgument("unknown distribution '" + name +
                        "' (gaussian, rademacher, uniform, twopoint:<p>, exponential)");
}

SquareMatrix sample_matrix(const EnsembleSpec& spec) {
  if (spec.n < 1) throw InvalidArgument("sample_matrix: n must be >= 1");
  return SquareMatrix(draw_block(spec.dist, spec.seed, 0, spec.n, spec.n));
}

RectMatrix sample_prefix(const EnsembleSpec& spec, Index p) {
  if (p < 1 || p > spec.n) throw InvalidArgument("sample_prefix: need 1 <= p <= n");
  return RectMatrix(draw_block(spec.dist, spec.seed, 0, p, spec.n));
}

SquareMatrix uniform_noise(Index n, std::uint64_t seed) {
  return sample_matrix({n, UniformSqrt3{}, seed});
}

SquareMatrix smooth_perturb(const SquareMatrix& a, double epsilon, std::uint64_t seed) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) {
    throw InvalidArgument("smooth_perturb: epsilon must lie in [0, 1)");
  }
  if (epsilon == 0.0) return a;
  const SquareMatrix noise = uniform_noise(a.n(), seed);
  return SquareMatrix(std::sqrt(1.0 - epsilon * epsilon) * a.mat() + epsilon * noise.mat());
}

SquareMatrix replace_tail_rows(const SquareMatrix& a, Index k, const EntryDistribution& dist,
                               std::uint64_t seed) {
  const Index n = a.n();
  if (k < 0 || k > n) throw InvalidArgument("replace_tail_rows: need 0 <= k <= n");
  if (k == 0) return a;
  Matrix m = a.mat();
  m.bottomRows(k) = draw_block(dist, seed, n - k, k, n);
  return SquareMatrix(std::move(m));
}

}  // namespace logdet
