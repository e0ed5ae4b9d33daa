#pragma once

#include "urigid/framework.hpp"
#include "urigid/stress.hpp"

namespace urigid {

/// n x (n-1-r) matrix whose columns span the null space of the augmented
/// matrix. Row i is the Gale transform of p^i.
struct GaleMatrix {
  Matrix Z;
};

/// Gale matrix taken from the last n-1-r columns of a maximum-rank stress
/// matrix. Entry (i, j) vanishes whenever node i is a non-neighbor of node
/// j + r + 1 (0-based): it is the non-edge entry s_{i, j+r+1}.
struct CanonicalGaleMatrix {
  Matrix Z;
  StressMatrix origin;
};

/// Orthonormal Gale matrix of the configuration. Throws Error when the
/// Gale dimension is zero or the points do not affinely span R^r.
GaleMatrix gale_basis(const Configuration& config, const Tolerances& tol = {});

/// Checks that A * Z vanishes and Z has full column rank n-1-r.
bool is_gale_matrix(const Configuration& config, const Matrix& Z, const Tolerances& tol = {});

/// Extracts the canonical Gale matrix from a validated maximum-rank stress
/// matrix. Throws Error if the extracted columns are rank deficient, are not
/// annihilated by A, or break the non-edge zero pattern.
CanonicalGaleMatrix canonical_gale(const Framework& fw, const StressMatrix& S,
                                   const Tolerances& tol = {});

/// The product form Z * Psi * Z2^T, with Z2 the bottom square block of Z.
/// Spans the same space as canonical_gale(); kept as a cross-check.
Matrix canonical_gale_product(const Matrix& Z, const Matrix& psi);

/// True iff every square row-submatrix of Z is nonsingular, judged by
/// |det| > rank_rtol after orthonormalizing the columns of Z. Enumerates subsets when
/// C(n, cols) <= cap, otherwise rebuilds a configuration from Z and runs
/// the point-side determinant test with `point_cap`.
bool gale_general_position_check(const Matrix& Z, const Tolerances& tol = {},
                                 std::uint64_t cap = kDefaultSubsetCap,
                                 std::uint64_t point_cap = kDefaultSubsetCap);

/// Submatrix enumeration only, no fallback.
bool gale_general_position_by_submatrices(const Matrix& Z, const Tolerances& tol);

/// A configuration (one point per row of Z) whose Gale space is span(Z).
/// Requires Z^T e = 0.
Configuration configuration_from_gale(const Matrix& Z, const Tolerances& tol = {});

}  // namespace urigid
