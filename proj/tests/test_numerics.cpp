#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "urigid/numerics.hpp"

using namespace urigid;
using testing::Rng;

TEST_CASE("numeric_rank on small matrices") {
  CHECK(numeric_rank(Matrix::Identity(3, 3)) == 3);
  CHECK(numeric_rank(Matrix::Zero(2, 2)) == 0);
  Matrix m(2, 2);
  m << 1, 2, 2, 4;
  // Second row is twice the first: singular values 5 and 0.
  CHECK(numeric_rank(m) == 1);
  CHECK(numeric_rank(Matrix(0, 3)) == 0);
}

TEST_CASE("nullspace_basis examples") {
  CHECK(nullspace_basis(Matrix::Identity(2, 2)).cols() == 0);
  CHECK(nullspace_basis(Matrix::Identity(2, 2)).rows() == 2);

  Matrix row(1, 2);
  row << 1, 1;
  const Matrix b = nullspace_basis(row);
  REQUIRE(b.cols() == 1);
  CHECK(std::abs(std::abs(b(0, 0)) - 1 / std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(b(0, 0) + b(1, 0)) < 1e-12);

  Matrix a(3, 4);
  a << 0, 1, 1, 0,
       0, 0, 1, 1,
       1, 1, 1, 1;
  const Matrix z = nullspace_basis(a);
  REQUIRE(z.cols() == 1);
  Vector expect(4);
  expect << 0.5, -0.5, 0.5, -0.5;
  CHECK(std::abs(std::abs(z.col(0).dot(expect)) - 1.0) < 1e-12);
}

TEST_CASE("nullspace_basis is orthonormal and annihilated, rank + nullity = cols") {
  Rng rng(11);
  Tolerances tol;
  for (int trial = 0; trial < 60; ++trial) {
    const int rows = 1 + rng.below(7);
    const int cols = 1 + rng.below(7);
    const int k = 1 + rng.below(std::min(rows, cols));
    // Product of random factors has rank k almost surely.
    const Matrix m = rng.matrix(rows, k) * rng.matrix(k, cols);
    const Matrix b = nullspace_basis(m, tol);
    CHECK(numeric_rank(m, tol) + b.cols() == cols);
    CHECK(b.cols() == cols - k);
    if (b.cols() == 0) continue;
    const double smax = Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
    CHECK((m * b).cwiseAbs().maxCoeff() <= tol.residual_atol * smax);
    CHECK((b.transpose() * b - Matrix::Identity(b.cols(), b.cols())).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("sym_eigen examples") {
  const SymEigen d = sym_eigen(Eigen::Vector2d(2, 1).asDiagonal().toDenseMatrix());
  CHECK(d.values(0) == doctest::Approx(1.0));
  CHECK(d.values(1) == doctest::Approx(2.0));

  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;
  const SymEigen s = sym_eigen(swap);
  CHECK(s.values(0) == doctest::Approx(-1.0));
  CHECK(s.values(1) == doctest::Approx(1.0));
  CHECK(std::abs(s.vectors(0, 0) + s.vectors(1, 0)) < 1e-12);
  CHECK(std::abs(s.vectors(0, 1) - s.vectors(1, 1)) < 1e-12);
  CHECK(std::abs(std::abs(s.vectors(0, 0)) - 1 / std::sqrt(2.0)) < 1e-12);

  Vector z(4);
  z << 1, -1, 1, -1;
  const SymEigen o = sym_eigen(z * z.transpose());
  for (int k = 0; k < 3; ++k) CHECK(std::abs(o.values(k)) < 1e-12);
  CHECK(o.values(3) == doctest::Approx(4.0));

  Matrix skew(2, 2);
  skew << 0, 1, 0, 0;
  CHECK_THROWS_AS(sym_eigen(skew), Error);
}

TEST_CASE("is_psd threshold scales with lambda_max") {
  Tolerances tol;
  CHECK(is_psd(Eigen::Vector3d(-5e-10, 0, 1), tol));
  CHECK_FALSE(is_psd(Eigen::Vector3d(-2e-9, 0, 1), tol));
  CHECK(is_psd(Eigen::Vector3d(-5e-7, 0, 1000), tol));
  CHECK_FALSE(is_psd(Eigen::Vector3d(-2e-6, 0, 1000), tol));
}

TEST_CASE("psd_sqrt examples") {
  CHECK(psd_sqrt(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(3, 3)));
  const Matrix d = psd_sqrt(Eigen::Vector2d(4, 9).asDiagonal().toDenseMatrix());
  CHECK(d(0, 0) == doctest::Approx(2.0));
  CHECK(d(1, 1) == doctest::Approx(3.0));
  CHECK(std::abs(d(0, 1)) < 1e-14);

  // Eigenvalues 1.5 and 0.5 along (1,1) and (1,-1).
  Matrix m(2, 2);
  m << 1, 0.5, 0.5, 1;
  const Matrix s = psd_sqrt(m);
  const double diag = (std::sqrt(1.5) + std::sqrt(0.5)) / 2;
  const double off = (std::sqrt(1.5) - std::sqrt(0.5)) / 2;
  CHECK(s(0, 0) == doctest::Approx(diag).epsilon(1e-12));
  CHECK(s(0, 1) == doctest::Approx(off).epsilon(1e-12));
  CHECK(std::abs(s(0, 0) - 0.9659) < 1e-3);
  CHECK(std::abs(s(0, 1) - 0.2588) < 1e-3);

  Matrix neg(2, 2);
  neg << 1, 0, 0, -1;
  CHECK_THROWS_AS(psd_sqrt(neg), Error);

  Matrix edge(2, 2);
  edge << 1, 0, 0, -1e-12;
  CHECK(psd_sqrt(edge)(1, 1) == 0.0);
}

TEST_CASE("psd_sqrt squares back for well-conditioned PSD input") {
  Rng rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + rng.below(6);
    const Matrix g = rng.matrix(n, n);
    const Matrix m = g * g.transpose() + 0.1 * Matrix::Identity(n, n);
    const Matrix s = psd_sqrt(m);
    CHECK((s * s - m).norm() <= 1e-8 * m.norm());
    CHECK((s - s.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("binomial and subset enumeration") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(10, 0) == 1);
  CHECK(binomial(3, 5) == 0);
  CHECK(binomial(200, 100) == UINT64_MAX);
  int count = 0;
  std::vector<int> last;
  CHECK(for_each_subset(5, 3, [&](const std::vector<int>& s) {
    ++count;
    last = s;
    return true;
  }));
  CHECK(count == 10);
  CHECK(last == std::vector<int>{2, 3, 4});
  count = 0;
  CHECK_FALSE(for_each_subset(5, 3, [&](const std::vector<int>&) { return ++count < 4; }));
  CHECK(count == 4);
}

TEST_CASE("tolerance validation") {
  Tolerances t;
  CHECK_NOTHROW(t.validate());
  t.psd_atol = 0;
  CHECK_THROWS_AS(t.validate(), Error);
  t = {};
  t.rank_rtol = 1.5;
  CHECK_THROWS_AS(t.validate(), Error);
  CHECK_THROWS_AS(require_finite(Matrix::Constant(1, 1, NAN), "x"), Error);
}
