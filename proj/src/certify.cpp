#include "urigid/certify.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>

#include "urigid/gale.hpp"

namespace urigid {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::UniversallyRigid: return "UniversallyRigid";
    case Verdict::AffineFlexExists: return "AffineFlexExists";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

const char* to_string(Route r) {
  switch (r) {
    case Route::CompleteGraph: return "complete_graph";
    case Route::GeneralPositionStress: return "general_position_stress";
    case Route::StressNoQuadric: return "stress_no_quadric";
    case Route::QuadricFlex: return "quadric_flex";
    case Route::None: return "none";
  }
  return "none";
}

Verdict verdict_from_string(const std::string& s) {
  for (auto v : {Verdict::UniversallyRigid, Verdict::AffineFlexExists, Verdict::Inconclusive})
    if (s == to_string(v)) return v;
  throw Error("unknown verdict '" + s + "'");
}

Route route_from_string(const std::string& s) {
  for (auto r : {Route::CompleteGraph, Route::GeneralPositionStress, Route::StressNoQuadric,
                 Route::QuadricFlex, Route::None})
    if (s == to_string(r)) return r;
  throw Error("unknown route '" + s + "'");
}

std::string framework_digest(const Framework& fw) {
  std::string text = "urigid-framework-v1\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%d %d\n", fw.dimension(), fw.num_nodes());
  text += buf;
  const auto& p = fw.config().points();
  for (int i = 0; i < fw.num_nodes(); ++i) {
    for (int a = 0; a < fw.dimension(); ++a) {
      std::snprintf(buf, sizeof buf, "%.17g ", p(a, i));
      text += buf;
    }
    text += '\n';
  }
  for (const auto& [i, j] : fw.graph().edges()) {
    std::snprintf(buf, sizeof buf, "%d %d\n", i + 1, j + 1);
    text += buf;
  }

  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), text.data(), text.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), md, &len) != 1)
    throw Error("framework_digest: SHA-256 failed");
  std::string hex;
  hex.reserve(2 * len);
  for (unsigned int k = 0; k < len; ++k) {
    std::snprintf(buf, sizeof buf, "%02x", md[k]);
    hex += buf;
  }
  return hex;
}

namespace {

constexpr double kFlexGap = 1e-6;

void record_stress(Certificate& cert, const Framework& fw, const EquilibriumStress& w,
                   const StressMatrix& S, const Tolerances& tol) {
  const StressReport rep = validate_stress(fw, S.S, tol);
  auto& h = cert.hypotheses;
  h.stress_found = rep.certifies();
  h.stress_rank = rep.rank;
  h.lambda_min = rep.lambda_min;
  h.lambda_max = rep.lambda_max;
  h.psd = rep.psd;
  h.max_rank = rep.max_rank;
  cert.omega = w.omega;
  cert.omega_edges = fw.graph().edges();
  cert.spectrum = rep.eigenvalues;
  // Eigenvalue r+1 (0-based) is the smallest one on the Gale space when
  // S has its maximum rank.
  const auto r = static_cast<Eigen::Index>(fw.dimension());
  if (rep.eigenvalues.size() > r + 1) h.gale_lambda_min = rep.eigenvalues(r + 1);
}

// Fills general position, stress and quadric hypotheses. Returns the stress
// matrix when one was obtained.
std::optional<StressMatrix> evaluate(Certificate& cert, const Framework& fw, const Tolerances& tol,
                                     const CertifyOptions& opts) {
  auto& h = cert.hypotheses;
  h.general_position = is_general_position(fw.config(), tol, opts.subset_cap, opts.subset_cap);
  h.stress_space_dim = static_cast<int>(stress_space_basis(fw, tol).size());

  if (opts.user_stress) {
    h.stress_user_supplied = true;
    StressMatrix S = assemble_stress(fw, *opts.user_stress, tol);
    record_stress(cert, fw, *opts.user_stress, S, tol);
    if (!h.stress_found) cert.notes.push_back("supplied stress is not a PSD stress of rank n-r-1");
    return S;
  }
  if (auto found = find_max_rank_psd_stress(fw, tol, opts.search)) {
    record_stress(cert, fw, found->stress, found->matrix, tol);
    return std::move(found->matrix);
  }
  cert.notes.push_back(h.stress_space_dim == 0
                           ? "only the zero equilibrium stress exists"
                           : "no PSD stress of rank n-r-1 found by the search");
  return std::nullopt;
}

std::optional<QuadricWitness> evaluate_quadric(Certificate& cert, const Framework& fw,
                                               const Tolerances& tol) {
  const Matrix sys = edge_quadric_system(fw);
  cert.hypotheses.quadric_kernel_dim = static_cast<int>(sys.cols()) - numeric_rank(sys, tol);
  return detect_quadric_at_infinity(fw, tol);
}

}  // namespace

Certificate certify(const Framework& fw, const Tolerances& tol, const CertifyOptions& opts) {
  tol.validate();
  Certificate cert;
  cert.tolerances = tol;
  cert.seed = opts.search.seed;
  cert.framework_digest = framework_digest(fw);

  const int n = fw.num_nodes();
  const int r = fw.dimension();
  auto& h = cert.hypotheses;
  h.complete_graph = fw.graph().is_complete();
  h.dimension_ok = r <= n - 2;
  h.spanning = check_spanning(fw.config(), tol);
  h.min_degree = min_degree_check(fw);
  h.missing_edges = static_cast<int>(fw.graph().non_edges().size());
  h.target_rank = std::max(0, n - 1 - r);

  if (h.complete_graph) {
    cert.verdict = Verdict::UniversallyRigid;
    cert.route = Route::CompleteGraph;
    cert.notes.push_back("complete graph: every pairwise distance is an edge length; "
                         "outside the connected, non-complete setting of the stress criterion");
    if (h.dimension_ok && h.spanning) {
      evaluate(cert, fw, tol, opts);
      if (h.general_position.value_or(false) && h.stress_found)
        cert.notes.push_back("general-position stress criterion also holds");
    }
    return cert;
  }

  if (!h.dimension_ok) {
    cert.notes.push_back("r > n - 2: the Gale dimension is zero, outside certification scope");
    return cert;
  }
  if (!h.spanning) throw Error("certify: points do not affinely span R^" + std::to_string(r));

  const auto S = evaluate(cert, fw, tol, opts);
  const auto quadric = evaluate_quadric(cert, fw, tol);

  if (h.general_position.value_or(false) && h.stress_found) {
    cert.verdict = Verdict::UniversallyRigid;
    cert.route = Route::GeneralPositionStress;
    try {
      const CanonicalGaleMatrix zhat = canonical_gale(fw, *S, tol);
      const Matrix sys = missing_edge_system_canonical(fw, zhat);
      h.canonical_system_full_rank = numeric_rank(sys, tol) == sys.cols();
      cert.canonical_gale = zhat.Z;
    } catch (const Error& e) {
      h.canonical_system_full_rank = false;
      cert.notes.push_back(std::string("canonical Gale check failed: ") + e.what());
    }
    return cert;
  }

  if (h.stress_found && !quadric) {
    cert.verdict = Verdict::UniversallyRigid;
    cert.route = Route::StressNoQuadric;
    cert.notes.push_back("not in general position; no affine flex exists");
    return cert;
  }

  if (quadric) {
    cert.verdict = Verdict::AffineFlexExists;
    cert.route = Route::QuadricFlex;
    const AffineFlex flex = flex_motion_from_quadric(fw, *quadric, tol);
    cert.flex = FlexWitness{quadric->phi, flex.t, flex.motion.A, flex.flexed.points()};
    const Framework flexed(fw.graph(), flex.flexed);
    if (equivalent(fw, flexed, tol) && congruence_gap(fw.config(), flex.flexed) > kFlexGap) {
      cert.not_universally_rigid = true;
      cert.counterexample = flex.flexed.points();
      cert.notes.push_back("the flexed configuration is equivalent and not congruent: "
                           "not universally rigid");
    }
    if (h.stress_found)
      cert.notes.push_back("a PSD stress of rank n-r-1 exists together with an affine flex");
    return cert;
  }

  cert.notes.push_back("no certificate and no affine flex");
  return cert;
}

namespace {

void check_stress_claim(std::vector<std::string>& fail, const Framework& fw, const Certificate& cert,
                        const Tolerances& tol, bool require_certifying) {
  require_certifying = require_certifying || cert.hypotheses.stress_found;
  if (!cert.omega) {
    if (require_certifying) fail.push_back("stress: omega missing");
    return;
  }
  if (cert.omega_edges != fw.graph().edges()) {
    fail.push_back("stress: omega is indexed by a different edge set");
    return;
  }
  StressMatrix S;
  try {
    S = assemble_stress(fw, EquilibriumStress{*cert.omega}, tol);
  } catch (const Error& e) {
    fail.push_back(std::string("stress: ") + e.what());
    return;
  }
  const StressReport rep = validate_stress(fw, S.S, tol);
  if (require_certifying) {
    if (!rep.pattern_ok) fail.push_back("stress: zero pattern violated");
    if (!rep.equilibrium_ok) fail.push_back("stress: A S != 0");
    if (!rep.psd) fail.push_back("stress: S is not positive semidefinite");
    if (!rep.max_rank)
      fail.push_back("stress: rank " + std::to_string(rep.rank) + " != n - r - 1 = " +
                     std::to_string(rep.target_rank));
  }
  if (cert.spectrum.size() > 0) {
    const double scale = std::max(1.0, std::abs(rep.lambda_max));
    if (cert.spectrum.size() != rep.eigenvalues.size() ||
        max_abs(cert.spectrum - rep.eigenvalues) > tol.residual_atol * scale)
      fail.push_back("stress: recorded spectrum does not match omega");
  }
}

void check_flex_claim(std::vector<std::string>& fail, const Framework& fw, const Certificate& cert,
                      const Tolerances& tol) {
  if (!cert.flex) {
    fail.push_back("flex: witness missing");
    return;
  }
  const auto& f = *cert.flex;
  AffineFlex rebuilt{AffineMotion{}, Configuration(Matrix::Zero(1, 1)), 0.0};
  try {
    rebuilt = flex_motion_from_quadric(fw, QuadricWitness{f.phi}, tol);
  } catch (const Error& e) {
    fail.push_back(std::string("flex: ") + e.what());
    return;
  }
  if (std::abs(rebuilt.t - f.t) > tol.residual_atol * std::abs(rebuilt.t))
    fail.push_back("flex: recorded t does not match Phi");
  if (f.A.rows() != rebuilt.motion.A.rows() || f.A.cols() != rebuilt.motion.A.cols() ||
      max_abs(f.A - rebuilt.motion.A) > tol.residual_atol)
    fail.push_back("flex: recorded A does not match sqrt(I + t Phi)");
  const Matrix& q = f.flexed_points;
  if (q.rows() != fw.dimension() || q.cols() != fw.num_nodes()) {
    fail.push_back("flex: flexed configuration has the wrong shape");
    return;
  }
  const Framework flexed(fw.graph(), Configuration(q));
  if (!equivalent(fw, flexed, tol)) fail.push_back("flex: flexed configuration changes an edge length");
  if (max_abs(q - rebuilt.flexed.points()) > tol.residual_atol * std::max(1.0, max_abs(q)))
    fail.push_back("flex: flexed configuration is not A p");
  if (cert.not_universally_rigid) {
    if (!cert.counterexample) {
      fail.push_back("flex: counterexample missing");
    } else if (cert.counterexample->rows() != q.rows() || cert.counterexample->cols() != q.cols() ||
               max_abs(*cert.counterexample - q) != 0.0) {
      fail.push_back("flex: counterexample differs from the flexed configuration");
    } else if (congruence_gap(fw.config(), Configuration(q)) <= kFlexGap) {
      fail.push_back("flex: flexed configuration is congruent to p");
    }
  }
}

}  // namespace

std::vector<std::string> certificate_failures(const Framework& fw, const Certificate& cert,
                                              const Tolerances& tol) {
  std::vector<std::string> fail;
  if (cert.framework_digest != framework_digest(fw)) {
    fail.push_back("digest: certificate was issued for a different framework");
    return fail;
  }
  const int n = fw.num_nodes();
  const int r = fw.dimension();
  switch (cert.verdict) {
    case Verdict::UniversallyRigid:
      switch (cert.route) {
        case Route::CompleteGraph:
          if (!fw.graph().is_complete()) fail.push_back("route: graph is not complete");
          check_stress_claim(fail, fw, cert, tol, false);
          break;
        case Route::GeneralPositionStress:
          if (r > n - 2) fail.push_back("hypothesis: r > n - 2");
          if (!check_spanning(fw.config(), tol)) fail.push_back("hypothesis: points do not span");
          else if (!is_general_position(fw.config(), tol))
            fail.push_back("hypothesis: configuration is not in general position");
          check_stress_claim(fail, fw, cert, tol, true);
          if (fail.empty() && !fw.graph().is_complete()) {
            const StressMatrix S = assemble_stress(fw, EquilibriumStress{*cert.omega}, tol);
            try {
              const CanonicalGaleMatrix zhat = canonical_gale(fw, S, tol);
              const Matrix sys = missing_edge_system_canonical(fw, zhat);
              if (numeric_rank(sys, tol) != sys.cols())
                fail.push_back("mechanism: canonical missing-edge system has a nonzero solution");
            } catch (const Error& e) {
              fail.push_back(std::string("mechanism: ") + e.what());
            }
          }
          break;
        case Route::StressNoQuadric: {
          if (r > n - 2) fail.push_back("hypothesis: r > n - 2");
          check_stress_claim(fail, fw, cert, tol, true);
          const Matrix sys = edge_quadric_system(fw);
          if (numeric_rank(sys, tol) != sys.cols())
            fail.push_back("hypothesis: edge directions lie on a quadric at infinity");
          break;
        }
        default:
          fail.push_back(std::string("route: '") + to_string(cert.route) +
                         "' cannot support UniversallyRigid");
      }
      break;
    case Verdict::AffineFlexExists:
      if (cert.route != Route::QuadricFlex) fail.push_back("route: expected quadric_flex");
      check_flex_claim(fail, fw, cert, tol);
      check_stress_claim(fail, fw, cert, tol, false);
      break;
    case Verdict::Inconclusive:
      check_stress_claim(fail, fw, cert, tol, false);
      if (cert.flex) check_flex_claim(fail, fw, cert, tol);
      break;
  }
  return fail;
}

}  // namespace urigid
