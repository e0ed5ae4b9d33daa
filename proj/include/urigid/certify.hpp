#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "urigid/affine.hpp"
#include "urigid/framework.hpp"
#include "urigid/stress.hpp"

namespace urigid {

enum class Verdict { UniversallyRigid, AffineFlexExists, Inconclusive };

/// How a verdict was reached.
///  - CompleteGraph: every pair is an edge, all distances are pinned.
///  - GeneralPositionStress: general position plus a PSD stress of rank n-r-1.
///  - StressNoQuadric: a PSD stress of rank n-r-1 and no quadric at infinity
///    through the edge directions (no affine flex).
///  - QuadricFlex: an explicit affine flex was constructed.
enum class Route { CompleteGraph, GeneralPositionStress, StressNoQuadric, QuadricFlex, None };

const char* to_string(Verdict v);
const char* to_string(Route r);
Verdict verdict_from_string(const std::string& s);
Route route_from_string(const std::string& s);

struct Hypotheses {
  bool complete_graph = false;
  bool dimension_ok = false;  // r <= n - 2
  bool spanning = false;
  std::optional<bool> general_position;
  bool min_degree = false;
  int missing_edges = 0;
  int stress_space_dim = 0;
  bool stress_found = false;
  bool stress_user_supplied = false;
  int stress_rank = 0;
  int target_rank = 0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double gale_lambda_min = 0.0;  // smallest of the n-r-1 largest eigenvalues
  bool psd = false;
  bool max_rank = false;
  std::optional<int> quadric_kernel_dim;
  std::optional<bool> canonical_system_full_rank;
};

struct FlexWitness {
  Matrix phi;
  double t = 0.0;
  Matrix A;
  Matrix flexed_points;  // r x n
};

struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  Route route = Route::None;
  bool not_universally_rigid = false;
  std::vector<std::string> notes;
  Hypotheses hypotheses;
  std::optional<Vector> omega;   // aligned with omega_edges
  std::vector<Edge> omega_edges;  // the graph's edges when omega was issued
  Vector spectrum;              // eigenvalues of S, ascending
  std::optional<Matrix> canonical_gale;
  std::optional<FlexWitness> flex;
  std::optional<Matrix> counterexample;  // r x n, equivalent and not congruent
  Tolerances tolerances;
  std::string framework_digest;
  std::uint64_t seed = 0;
};

struct CertifyOptions {
  StressSearchOptions search;
  std::optional<EquilibriumStress> user_stress;
  std::uint64_t subset_cap = kDefaultSubsetCap;
};

/// Hex SHA-256 of a canonical text form of the framework.
std::string framework_digest(const Framework& fw);

/// Runs the certification pipeline. Throws Error only when the
/// configuration does not affinely span R^r or a user stress is invalid.
Certificate certify(const Framework& fw, const Tolerances& tol = {}, const CertifyOptions& opts = {});

/// Recomputes every claim of `cert` from the raw framework and the witnesses
/// it carries. Returns the list of failed checks (empty means valid).
std::vector<std::string> certificate_failures(const Framework& fw, const Certificate& cert,
                                              const Tolerances& tol = {});

inline bool verify_certificate(const Framework& fw, const Certificate& cert, const Tolerances& tol = {}) {
  return certificate_failures(fw, cert, tol).empty();
}

struct RefuteOptions {
  int max_iterations = 20000;
  double residual_tol = 1e-16;   // on sum (|q_i-q_j|^2 - d_ij^2)^2 / diameter^4
  double gap_threshold = 1e-6;   // relative congruence gap required for a counterexample
  double perturbation = 0.1;     // start noise, fraction of the configuration diameter
  int jobs = 1;
};

struct Refutation {
  Configuration q;
  int dimension = 0;
  int restart = -1;
  double residual = 0.0;
  double gap = 0.0;
};

/// Relative equivalence residual of q against fw's edge lengths.
double equivalence_residual(const Framework& fw, const Matrix& q);

/// For each target dimension, minimizes the edge-length residual by gradient
/// descent from perturbed copies of p. Returns the first configuration that
/// is equivalent (residual <= residual_tol) but not congruent
/// (gap >= gap_threshold). Finding nothing proves nothing.
std::optional<Refutation> refute_by_search(const Framework& fw, const std::vector<int>& dims,
                                           int restarts, std::uint64_t seed,
                                           const RefuteOptions& opts = {});

}  // namespace urigid
