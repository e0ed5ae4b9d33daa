#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace urigid {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Raised for invalid inputs and violated preconditions anywhere in the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric thresholds that stand in for exact-arithmetic rank, sign and
/// equality statements.
struct Tolerances {
  double rank_rtol = 1e-9;      // singular values <= rank_rtol * sigma_max count as zero
  double psd_atol = 1e-9;       // lambda_min >= -psd_atol * max(1, lambda_max) counts as PSD
  double residual_atol = 1e-8;  // bound on relative linear-system residuals

  /// Throws Error unless every field is positive and rank_rtol < 1.
  void validate() const;
};

/// Largest absolute entry; 0 for empty matrices.
double max_abs(const Matrix& m);

/// Throws Error naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

/// Number of singular values strictly above rank_rtol * sigma_max.
int numeric_rank(const Matrix& m, const Tolerances& tol = {});

/// Orthonormal basis (as columns) of the numerical null space of `m`.
/// The basis has cols(m) - numeric_rank(m) columns, ordered by increasing
/// singular value, so the last column is the smallest-singular-value direction.
Matrix nullspace_basis(const Matrix& m, const Tolerances& tol = {});

struct SymEigen {
  Vector values;   // ascending
  Matrix vectors;  // orthonormal columns, matching `values`
};

/// Eigendecomposition of a symmetric matrix. Throws if `m` is asymmetric
/// beyond residual_atol * max(1, max|m|).
SymEigen sym_eigen(const Matrix& m, const Tolerances& tol = {});

/// True when lambda_min >= -psd_atol * max(1, lambda_max).
bool is_psd(const Vector& ascending_eigenvalues, const Tolerances& tol = {});

/// Symmetric square root of a PSD matrix. Eigenvalues in
/// [-psd_atol * lambda_max, 0) are clamped to zero; anything more negative
/// is rejected.
Matrix psd_sqrt(const Matrix& m, const Tolerances& tol = {});

/// n choose k, saturating at UINT64_MAX.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Calls `visit(indices)` for every k-subset of {0..n-1} in lexicographic
/// order; stops early when `visit` returns false. Returns false on early stop.
template <class Visit>
bool for_each_subset(int n, int k, Visit&& visit) {
  if (k < 0 || k > n) return true;
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    if (!visit(static_cast<const std::vector<int>&>(idx))) return false;
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return true;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace urigid
