#include "logdet/detcore.hpp"
#include "logdet/ensemble.hpp"
#include "logdet/errors.hpp"
#include "oracles.hpp"

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include <cmath>

using namespace logdet;

namespace {

SquareMatrix gaussian(Index n, std::uint64_t seed) { return sample_matrix({n, StandardGaussian{}, seed}); }

}  // namespace

TEST(LogAbsDet, SimpleCases) {
  EXPECT_EQ(log_abs_det(SquareMatrix::identity(7)), 0.0);
  EXPECT_NEAR(log_abs_det(SquareMatrix::from_rows({{2, 0}, {0, 3}})), std::log(6.0), 1e-15);
  const auto s = signed_log_det(SquareMatrix::from_rows({{1, 2}, {3, 4}}));
  EXPECT_EQ(s.sign, -1);
  EXPECT_NEAR(s.log_abs, std::log(2.0), 1e-15);
}

TEST(LogAbsDet, MatchesCofactorExpansion) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (Index n : {3, 4, 6}) {
      const auto a = sample_matrix({n, UniformSqrt3{}, seed});
      const long double det = oracle::cofactor_det(a.mat());
      const auto s = signed_log_det(a);
      EXPECT_NEAR(s.log_abs, std::log(std::fabs(static_cast<double>(det))), 1e-10 * std::max(1.0, std::abs(s.log_abs)));
      EXPECT_EQ(s.sign, det > 0 ? 1 : -1);
    }
  }
}

TEST(LogAbsDet, SingularThrows) {
  EXPECT_THROW(log_abs_det(SquareMatrix::from_rows({{1, 2}, {2, 4}})), SingularMatrix);
  EXPECT_THROW(log_abs_det(SquareMatrix::from_rows({{0, 0}, {0, 1}})), SingularMatrix);
}

TEST(LogAbsDet, NoOverflowAtLargeN) {
  Matrix m = Matrix::Identity(300, 300) * 10.0;
  EXPECT_NEAR(log_abs_det(SquareMatrix{m}), 300 * std::log(10.0), 1e-9);
}

TEST(SingularValues, Cases) {
  EXPECT_EQ(singular_values(SquareMatrix::from_rows({{3, 0}, {0, -4}})), (std::vector<double>{4, 3}));
  for (double s : singular_values(SquareMatrix::identity(5))) EXPECT_NEAR(s, 1.0, 1e-15);
}

TEST(SingularValues, AgreeWithDeterminantAndEigenSvd) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = gaussian(6, seed);
    const auto s = singular_values(a);
    double log_prod = 0;
    for (double v : s) log_prod += std::log(v);
    EXPECT_NEAR(log_prod, log_abs_det(a), 1e-8 * std::max(1.0, std::abs(log_prod)));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(a.mat()));
    for (Index i = 0; i < 6; ++i) EXPECT_NEAR(s[i], svd.singularValues()(i), 1e-12 * s[0]);
    EXPECT_TRUE(std::is_sorted(s.rbegin(), s.rend()));
  }
  const auto big = gaussian(40, 3);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(big.mat()));
  const auto s = singular_values(big);
  for (Index i = 0; i < 40; ++i) EXPECT_NEAR(s[i], svd.singularValues()(i), 1e-11 * s[0]);
  EXPECT_DOUBLE_EQ(operator_norm(big), s[0]);
}

TEST(SingularValues, ZerosAllowed) {
  const auto s = singular_values(SquareMatrix::from_rows({{1, 2}, {2, 4}}));
  EXPECT_NEAR(s[1], 0.0, 1e-15);
  EXPECT_NEAR(s[0], 5.0, 1e-14);
}

TEST(Projection, FirstRowUnitVector) {
  const auto a = SquareMatrix::from_rows({{1, 0, 0}, {0.3, 2, 1}, {5, 1, 1}});
  const auto p = projection_matrix(a, 1);
  EXPECT_TRUE(p.p.isApprox(Matrix(Eigen::Vector3d(0, 1, 1).asDiagonal()), 1e-15));
  EXPECT_EQ(p.rank_deficit, 1);
}

TEST(Projection, LawsOnRandomMatrices) {
  for (Index n : {5, 16, 33}) {
    const auto a = sample_matrix({n, StandardizedExponential{}, static_cast<std::uint64_t>(n)});
    for (Index i = 1; i < n; i += std::max<Index>(1, n / 6)) {
      const auto proj = projection_matrix(a, i);
      const Matrix& p = proj.p;
      EXPECT_LE((p * p - p).cwiseAbs().maxCoeff(), 1e-8);
      EXPECT_EQ((p - p.transpose()).cwiseAbs().maxCoeff(), 0.0);
      EXPECT_NEAR(proj.trace(), static_cast<double>(n - i), 1e-9);
      for (Index j = 0; j < i; ++j) {
        EXPECT_LE((p * a.mat().row(j).transpose()).norm(), 1e-9 * a.mat().row(j).norm());
      }
    }
  }
}

TEST(Projection, Errors) {
  const auto a = SquareMatrix::from_rows({{1, 2, 3}, {2, 4, 6}, {0, 0, 1}});
  EXPECT_THROW(projection_matrix(a, 2), DegenerateRows);
  EXPECT_THROW(projection_matrix(a, 0), InvalidArgument);
  EXPECT_THROW(projection_matrix(a, 3), InvalidArgument);
}

TEST(Perpendiculars, HandCases) {
  auto g = perpendicular_lengths(SquareMatrix::from_rows({{3, 0}, {0, 4}}));
  EXPECT_DOUBLE_EQ(g.gammas[0], 3.0);
  EXPECT_DOUBLE_EQ(g.gammas[1], 4.0);
  g = perpendicular_lengths(SquareMatrix::from_rows({{1, 2}, {3, 4}}));
  EXPECT_NEAR(g.gammas[0], std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(g.gammas[1], 2.0 / std::sqrt(5.0), 1e-15);
}

TEST(Perpendiculars, BaseTimesHeight) {
  for (Index n : {8, 32, 64, 100, 150}) {
    const auto a = gaussian(n, 1000 + n);
    const auto g = perpendicular_lengths(a);
    EXPECT_NEAR(g.log_sq_sum, 2.0 * log_abs_det(a), 1e-8) << "n=" << n;
  }
}

TEST(Perpendiculars, MatchHouseholderQr) {
  const auto a = sample_matrix({130, Rademacher{}, 4});
  const auto g = perpendicular_lengths(a);
  const auto ref = oracle::householder_gammas(a.mat());
  for (Index i = 0; i < 130; ++i) EXPECT_NEAR(g.gammas[i], ref[i], 1e-10 * ref[i]);
}

TEST(Perpendiculars, BasisIsOrthonormal) {
  const auto pb = perpendicular_basis(gaussian(90, 2));
  const Matrix gram = pb.basis * pb.basis.transpose();
  EXPECT_LE((gram - Matrix::Identity(90, 90)).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Perpendiculars, RankCollapseThrows) {
  Matrix m = gaussian(70, 9).mat();
  m.row(66) = 2.0 * m.row(3) - m.row(40);
  EXPECT_THROW(perpendicular_lengths(SquareMatrix{m}), DegenerateRows);
}

TEST(GammaViaProjection, Cases) {
  const auto a = SquareMatrix::from_rows({{1, 0, 0}, {1, 1, 0}, {0, 0, 1}});
  EXPECT_NEAR(gamma_sq_via_projection(a, 1), 1.0, 1e-15);
  const auto b = gaussian(16, 5);
  const auto g = perpendicular_lengths(b);
  for (Index i = 1; i < 16; ++i) {
    const double q = gamma_sq_via_projection(b, i);
    EXPECT_GE(q, 0.0);
    EXPECT_NEAR(q, g.gammas[i] * g.gammas[i], 1e-8 * q);
  }
}

TEST(Cholesky, RejectsIndefinite) {
  Matrix m(2, 2);
  m << 1, 2, 2, 1;
  EXPECT_FALSE(cholesky_lower(m).has_value());
  m << 4, 2, 2, 3;
  const auto l = cholesky_lower(m);
  ASSERT_TRUE(l.has_value());
  EXPECT_TRUE((*l * l->transpose()).isApprox(m, 1e-15));
}

TEST(Cofactor, DiagonalCase) {
  const auto v = cofactor_unit_vector(SquareMatrix::from_rows({{2, 0}, {0, 3}}));
  EXPECT_NEAR(v[0], 0.0, 1e-15);
  EXPECT_NEAR(v[1], 1.0, 1e-15);
}

TEST(Cofactor, MatchesExplicitMinorsAndExpansion) {
  for (Index n : {2, 3, 5, 6}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const auto a = gaussian(n, 50 + seed);
      const auto v = cofactor_unit_vector(a);
      const auto cof = oracle::last_row_cofactors(a.mat());
      long double delta = 0;
      for (auto c : cof) delta += c * c;
      delta = std::sqrt(delta);
      double norm = 0, expansion = 0;
      for (Index k = 0; k < n; ++k) {
        EXPECT_NEAR(v[k], static_cast<double>(cof[k] / delta), 1e-12);
        norm += v[k] * v[k];
        expansion += a(n - 1, k) * v[k];
      }
      EXPECT_NEAR(norm, 1.0, 1e-10);
      const double det = static_cast<double>(oracle::cofactor_det(a.mat()));
      EXPECT_NEAR(expansion, det / static_cast<double>(delta), 1e-10 * std::abs(det / delta) + 1e-14);
    }
  }
}

TEST(Cofactor, CauchyBinetRatio) {
  const auto a = gaussian(6, 77);
  const auto v = cofactor_unit_vector(a);
  const Matrix top = a.mat().topRows(5);
  for (Index k = 0; k < 6; ++k) {
    // A_{nk}: first n-1 rows without column k; b_k: column k of those rows.
    Matrix ank(5, 5);
    for (Index c = 0, cc = 0; c < 6; ++c)
      if (c != k) ank.col(cc++) = top.col(c);
    const Eigen::VectorXd b = top.col(k);
    const Eigen::MatrixXd gram = ank * ank.transpose();
    const double ratio = 1.0 / (1.0 + b.dot(gram.ldlt().solve(b)));
    EXPECT_NEAR(v[k] * v[k], ratio, 1e-8);
  }
}

TEST(Cofactor, LargeNProjectionPathAgreesWithExpansion) {
  // n = 9 takes the projector path; compare with signed cofactors from LU minors.
  const auto a = gaussian(9, 8);
  const auto v = cofactor_unit_vector(a);
  std::vector<double> cof(9);
  double delta = 0;
  for (Index k = 0; k < 9; ++k) {
    Matrix minor(8, 8);
    for (Index c = 0, cc = 0; c < 9; ++c)
      if (c != k) minor.col(cc++) = a.mat().topRows(8).col(c);
    cof[k] = (((8 + k) % 2 == 0) ? 1.0 : -1.0) * Eigen::MatrixXd(minor).determinant();
    delta += cof[k] * cof[k];
  }
  delta = std::sqrt(delta);
  for (Index k = 0; k < 9; ++k) EXPECT_NEAR(v[k], cof[k] / delta, 1e-10);
}

TEST(Cofactor, DegenerateThrows) {
  EXPECT_THROW(cofactor_unit_vector(SquareMatrix::from_rows({{1, 2, 3}, {2, 4, 6}, {1, 1, 1}})),
               DegenerateRows);
}
