#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "urigid/framework.hpp"

namespace urigid {

/// Edge weights aligned with Graph::edges().
struct EquilibriumStress {
  Vector omega;
};

/// n x n symmetric matrix: -omega on edges, exact zeros on non-edges,
/// diagonal equal to the incident stress sum, so S e = 0.
struct StressMatrix {
  Matrix S;
};

/// (r*n) x m matrix whose kernel is the space of equilibrium stresses.
/// Column k (edge (i,j)) holds p^i - p^j in block i and p^j - p^i in block j.
Matrix equilibrium_system(const Framework& fw);

/// Orthonormal basis of the equilibrium stress space; empty when only the
/// zero stress exists.
std::vector<EquilibriumStress> stress_space_basis(const Framework& fw,
                                                  const Tolerances& tol = {});

/// Builds the stress matrix of omega. Throws Error if omega has the wrong
/// length or is not an equilibrium stress (A * S too large).
StressMatrix assemble_stress(const Framework& fw, const EquilibriumStress& w,
                             const Tolerances& tol = {});

/// Residual of the equilibrium condition, relative to max|omega| * max|A|.
double equilibrium_residual(const Framework& fw, const EquilibriumStress& w);

struct StressReport {
  double max_off_pattern = 0.0;  // largest |s_ij| at a non-edge, i != j
  double max_row_sum = 0.0;      // largest |(S e)_i|
  double asymmetry = 0.0;
  double annihilation = 0.0;     // max |(A S)_ij|
  int rank = 0;
  int target_rank = 0;           // n - r - 1
  Vector eigenvalues;            // ascending
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool pattern_ok = false;
  bool equilibrium_ok = false;
  bool psd = false;
  bool max_rank = false;

  /// Pattern and equilibrium hold, S is PSD, and rank == n - r - 1.
  bool certifies() const { return pattern_ok && equilibrium_ok && psd && max_rank; }
};

/// Checks an arbitrary symmetric n x n matrix against every stress-matrix
/// property. Failures are reported, never thrown (except for a size mismatch).
StressReport validate_stress(const Framework& fw, const Matrix& S, const Tolerances& tol = {});

/// Psi = (Z^T Z)^{-1} Z^T S Z (Z^T Z)^{-1}, so that S = Z Psi Z^T. Throws
/// Error if Z is rank deficient or S does not lie in that form.
Matrix recover_psi(const StressMatrix& S, const Matrix& Z, const Tolerances& tol = {});

struct StressSearchOptions {
  int restarts = 8;
  int iterations = 10000;
  double step = 1.0;
  std::uint64_t seed = 0;
  int jobs = 1;
};

struct StressSearchResult {
  EquilibriumStress stress;
  StressMatrix matrix;
  double objective = 0.0;  // best lambda_min(sum x_k Psi_k) with |x| <= 1
  int restart = -1;
};

/// Best value of lambda_min(sum_k x_k Psi_k) over |x|_2 <= 1 found by projected
/// supergradient ascent from `opts.restarts` seeded random unit starts.
/// Returns the objective, the maximizer and the restart that produced it.
struct LambdaMinAscent {
  double objective = -std::numeric_limits<double>::infinity();
  Vector x;
  int restart = -1;
};
LambdaMinAscent maximize_min_eigenvalue(const std::vector<Matrix>& psis,
                                        const StressSearchOptions& opts);

/// Searches the stress space for a PSD stress matrix of rank n - r - 1.
/// Returns nothing when the best lambda_min found is <= 10 * psd_atol or the
/// resulting matrix fails validate_stress.
std::optional<StressSearchResult> find_max_rank_psd_stress(const Framework& fw,
                                                           const Tolerances& tol = {},
                                                           const StressSearchOptions& opts = {});

}  // namespace urigid
