#include "urigid/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace urigid {

void Tolerances::validate() const {
  if (!(rank_rtol > 0.0) || !(rank_rtol < 1.0))
    throw Error("tolerances: rank_rtol must lie in (0, 1)");
  if (!(psd_atol > 0.0)) throw Error("tolerances: psd_atol must be positive");
  if (!(residual_atol > 0.0)) throw Error("tolerances: residual_atol must be positive");
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw Error(std::string(what) + ": matrix has non-finite entries");
}

namespace {

Eigen::JacobiSVD<Matrix> full_svd(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

int rank_from_singular_values(const Vector& sv, double rtol) {
  if (sv.size() == 0) return 0;
  const double smax = sv(0);
  if (smax == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > rtol * smax) ++rank;
  return rank;
}

}  // namespace

int numeric_rank(const Matrix& m, const Tolerances& tol) {
  require_finite(m, "numeric_rank");
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return rank_from_singular_values(svd.singularValues(), tol.rank_rtol);
}

Matrix nullspace_basis(const Matrix& m, const Tolerances& tol) {
  require_finite(m, "nullspace_basis");
  const Eigen::Index cols = m.cols();
  if (m.rows() == 0) return Matrix::Identity(cols, cols);
  if (cols == 0) return Matrix(0, 0);
  const auto svd = full_svd(m);
  const int rank = rank_from_singular_values(svd.singularValues(), tol.rank_rtol);
  return svd.matrixV().rightCols(cols - rank);
}

SymEigen sym_eigen(const Matrix& m, const Tolerances& tol) {
  require_finite(m, "sym_eigen");
  if (m.rows() != m.cols()) throw Error("sym_eigen: matrix is not square");
  const double asym = max_abs(m - m.transpose());
  if (asym > tol.residual_atol * std::max(1.0, max_abs(m)))
    throw Error("sym_eigen: matrix is not symmetric (asymmetry " + std::to_string(asym) + ")");
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw Error("sym_eigen: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

bool is_psd(const Vector& values, const Tolerances& tol) {
  if (values.size() == 0) return true;
  const double lmin = values.minCoeff();
  const double lmax = values.maxCoeff();
  return lmin >= -tol.psd_atol * std::max(1.0, lmax);
}

Matrix psd_sqrt(const Matrix& m, const Tolerances& tol) {
  const SymEigen eig = sym_eigen(m, tol);
  if (eig.values.size() == 0) return m;
  const double lmax = eig.values.maxCoeff();
  const double floor = -tol.psd_atol * std::max(1.0, lmax);
  if (eig.values.minCoeff() < floor)
    throw Error("psd_sqrt: matrix is indefinite beyond tolerance");
  const Vector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  Matrix r = eig.vectors * roots.asDiagonal() * eig.vectors.transpose();
  return 0.5 * (r + r.transpose());
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    // result * num / i stays exact because result * num is divisible by i.
    if (result > kMax / num) return kMax;
    result = result * num / i;
  }
  return result;
}

}  // namespace urigid
