#pragma once

#include "logdet/matrix.hpp"

#include <cstdint>
#include <string>
#include <variant>

namespace logdet {

struct StandardGaussian {};
/// +1 or -1 with probability 1/2 each.
struct Rademacher {};
/// Uniform on [-sqrt(3), sqrt(3)].
struct UniformSqrt3 {};
/// Two atoms: sqrt((1-p)/p) with probability p, -sqrt(p/(1-p)) otherwise.
struct TwoPointAsym {
  double p = 0.5;
};
/// Exp(1) - 1.
struct StandardizedExponential {};

/// Entry law: mean 0, variance 1, finite fourth moment for every variant.
using EntryDistribution =
    std::variant<StandardGaussian, Rademacher, UniformSqrt3, TwoPointAsym, StandardizedExponential>;

/// Exact E x^4.
double fourth_moment(const EntryDistribution& dist);
/// Exact E |x|^3.
double third_abs_moment(const EntryDistribution& dist);
/// Exact E x^8 (used by the quartic-form bounds).
double eighth_moment(const EntryDistribution& dist);

/// Maps two independent (0,1) uniforms to one draw. Rejection-free.
double draw_entry(const EntryDistribution& dist, double u1, double u2);

/// Canonical CLI name: gaussian, rademacher, uniform, twopoint:<p>, exponential.
std::string to_string(const EntryDistribution& dist);
/// Inverse of to_string. Throws InvalidArgument on unknown names or p outside (0,1).
EntryDistribution parse_distribution(const std::string& name);

struct EnsembleSpec {
  Index n = 1;
  EntryDistribution dist = StandardGaussian{};
  std::uint64_t seed = 0;
};

/// n x n matrix of i.i.d. draws. Entry (i, j) depends only on (dist, seed, i, j).
SquareMatrix sample_matrix(const EnsembleSpec& spec);

/// The first p rows of sample_matrix(spec), without drawing the rest.
RectMatrix sample_prefix(const EnsembleSpec& spec, Index p);

/// n x n matrix of i.i.d. UniformSqrt3 entries (the smoothing noise).
SquareMatrix uniform_noise(Index n, std::uint64_t seed);

/// sqrt(1 - eps^2) * A + eps * uniform_noise(n, seed). Requires 0 <= eps < 1.
SquareMatrix smooth_perturb(const SquareMatrix& a, double epsilon, std::uint64_t seed);

/// A with its last k rows redrawn from `dist`. Requires 0 <= k <= n.
SquareMatrix replace_tail_rows(const SquareMatrix& a, Index k, const EntryDistribution& dist,
                               std::uint64_t seed);

}  // namespace logdet
