#include "urigid/gale.hpp"

#include <cmath>
#include <string>

namespace urigid {

GaleMatrix gale_basis(const Configuration& config, const Tolerances& tol) {
  const int n = config.num_points();
  const int r = config.dimension();
  if (n - 1 - r < 1)
    throw Error("gale_basis: Gale dimension n - 1 - r is zero (simplex configuration)");
  Matrix z = nullspace_basis(augmented_matrix(config), tol);
  if (z.cols() != n - 1 - r)
    throw Error("gale_basis: points do not affinely span R^" + std::to_string(r));
  return {std::move(z)};
}

bool is_gale_matrix(const Configuration& config, const Matrix& Z, const Tolerances& tol) {
  const int n = config.num_points();
  const int rbar = n - 1 - config.dimension();
  if (Z.rows() != n || Z.cols() != rbar || rbar < 1) return false;
  const Matrix a = augmented_matrix(config);
  const double scale = std::max(1.0, max_abs(a)) * max_abs(Z);
  if (scale == 0.0) return false;
  if (max_abs(a * Z) > tol.residual_atol * scale) return false;
  return numeric_rank(Z, tol) == rbar;
}

CanonicalGaleMatrix canonical_gale(const Framework& fw, const StressMatrix& S, const Tolerances& tol) {
  const StressReport rep = validate_stress(fw, S.S, tol);
  if (!rep.pattern_ok || !rep.equilibrium_ok || !rep.max_rank)
    throw Error("canonical_gale: S is not a valid stress matrix of rank n - r - 1");
  const int n = fw.num_nodes();
  const int r = fw.dimension();
  const int rbar = n - 1 - r;
  Matrix zhat = S.S.rightCols(rbar);

  if (!is_gale_matrix(fw.config(), zhat, tol))
    throw Error("canonical_gale: extracted columns are not a Gale matrix (rank deficient or not "
                "annihilated); general position or the rank hypothesis fails");
  for (int j = 0; j < rbar; ++j) {
    const int node = r + 1 + j;
    for (int i : fw.graph().non_neighbors(node))
      if (zhat(i, j) != 0.0)
        throw Error("canonical_gale: zero pattern violated at row " + std::to_string(i + 1) +
                    ", column " + std::to_string(j + 1));
  }
  return {std::move(zhat), S};
}

Matrix canonical_gale_product(const Matrix& Z, const Matrix& psi) {
  const Eigen::Index rbar = Z.cols();
  return Z * psi * Z.bottomRows(rbar).transpose();
}

bool gale_general_position_by_submatrices(const Matrix& Z, const Tolerances& tol) {
  const int n = static_cast<int>(Z.rows());
  const int k = static_cast<int>(Z.cols());
  if (k == 0) return true;
  if (k > n || numeric_rank(Z, tol) < k) return false;
  const Matrix Q = Eigen::HouseholderQR<Matrix>(Z).householderQ() * Matrix::Identity(n, k);
  Matrix sub(k, k);
  return for_each_subset(n, k, [&](const std::vector<int>& idx) {
    for (int c = 0; c < k; ++c) sub.row(c) = Q.row(idx[static_cast<std::size_t>(c)]);
    return std::abs(sub.partialPivLu().determinant()) > tol.rank_rtol;
  });
}

Configuration configuration_from_gale(const Matrix& Z, const Tolerances& tol) {
  const auto n = Z.rows();
  const auto rbar = Z.cols();
  const int r = static_cast<int>(n - 1 - rbar);
  if (r < 1) throw Error("configuration_from_gale: Z has too many columns");
  if (max_abs(Z.colwise().sum()) > tol.residual_atol * std::max(1.0, max_abs(Z)) * static_cast<double>(n))
    throw Error("configuration_from_gale: columns of Z are not orthogonal to e");
  const Matrix w = nullspace_basis(Z.transpose(), tol);
  if (w.cols() != r + 1) throw Error("configuration_from_gale: Z is rank deficient");
  const Matrix centered = w.rowwise() - w.colwise().mean();
  Eigen::JacobiSVD<Matrix> svd(centered, Eigen::ComputeThinU);
  const Matrix coords = svd.matrixU().leftCols(r) * svd.singularValues().head(r).asDiagonal();
  return Configuration(coords.transpose());
}

bool gale_general_position_check(const Matrix& Z, const Tolerances& tol, std::uint64_t cap,
                                 std::uint64_t point_cap) {
  const auto n = static_cast<std::uint64_t>(Z.rows());
  const auto k = static_cast<std::uint64_t>(Z.cols());
  if (binomial(n, k) <= cap) return gale_general_position_by_submatrices(Z, tol);
  // The point side enumerates C(n, n - k) == C(n, k) subsets.
  if (binomial(n, n - k) > point_cap)
    throw Error("gale_general_position_check: subset count exceeds both enumeration caps");
  return is_general_position_by_determinants(configuration_from_gale(Z, tol), tol);
}

}  // namespace urigid
