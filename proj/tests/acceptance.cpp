// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "urigid/affine.hpp"
#include "urigid/certify.hpp"
#include "urigid/gale.hpp"
#include "urigid/generators.hpp"
#include "urigid/stress.hpp"

using namespace urigid;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail << "first failure: " << what << "; ";
      pass = false;
    }
  }
};

int kernel_dim(const Matrix& m, const Tolerances& tol) {
  return static_cast<int>(m.cols()) - numeric_rank(m, tol);
}

double max_rel_edge_change(const Framework& fw, const Configuration& q) {
  const auto before = distance_profile(fw);
  const auto after = distance_profile(Framework(fw.graph(), q));
  double worst = 0.0;
  for (std::size_t k = 0; k < before.size(); ++k)
    worst = std::max(worst, std::abs(after[k] - before[k]) / before[k]);
  return worst;
}

// ---- 1 -------------------------------------------------------------------

Outcome fixture_verdicts() {
  Outcome o;
  const Tolerances tol;
  double slowest = 0.0;

  {
    const auto t0 = Clock::now();
    const Framework fw = named_example("square-k4");
    const Certificate c = certify(fw, tol);
    slowest = std::max(slowest, seconds_since(t0));
    o.require(c.verdict == Verdict::UniversallyRigid, "square-k4 verdict");
    o.require(c.omega.has_value(), "square-k4 carries a stress");
    if (c.omega) {
      // Edge order (1,2) (1,3) (1,4) (2,3) (2,4) (3,4); sides +1, diagonals -1.
      Vector expect(6);
      expect << 1, -1, 1, 1, -1, 1;
      const Vector w = *c.omega / (*c.omega)(0);
      o.require((w - expect).cwiseAbs().maxCoeff() <= 1e-8, "square-k4 omega pattern");
      // With sides scaled to +1, S = z z^T for z = (1,-1,1,-1).
      const Vector ev = sym_eigen(assemble_stress(fw, {w}, tol).S).values;
      o.require((ev - Eigen::Vector4d(0, 0, 0, 4)).cwiseAbs().maxCoeff() <= 1e-8, "square-k4 spectrum");
      o.detail << "k4 spectrum {" << ev(3) << ", |others| <= " << ev.head(3).cwiseAbs().maxCoeff() << "}; ";
    }
  }
  {
    const auto t0 = Clock::now();
    const Certificate c = certify(named_example("square-c4"), tol);
    slowest = std::max(slowest, seconds_since(t0));
    o.require(c.verdict == Verdict::AffineFlexExists, "square-c4 verdict");
    o.require(c.flex.has_value(), "square-c4 flex witness");
    if (c.flex) {
      Matrix expect(2, 2);
      expect << 0, 1, 1, 0;
      const Matrix phi = c.flex->phi / c.flex->phi(0, 1);
      o.require((phi - expect).cwiseAbs().maxCoeff() <= 1e-8, "square-c4 Phi proportional to [[0,1],[1,0]]");
    }
  }
  {
    const auto t0 = Clock::now();
    const Framework fw = named_example("k3-line");
    const Certificate c = certify(fw, tol);
    const Matrix Z = gale_basis(fw.config(), tol).Z;
    slowest = std::max(slowest, seconds_since(t0));
    o.require(c.verdict == Verdict::UniversallyRigid, "k3-line verdict");
    const Vector z = Z.col(0) / Z(0, 0);
    o.require((z - Eigen::Vector3d(1, -2, 1)).cwiseAbs().maxCoeff() <= 1e-8, "k3-line Z proportional to (1,-2,1)");
  }
  o.require(slowest < 1.0, "runtime under 1 s per fixture");
  o.detail << "slowest fixture " << slowest << " s";
  return o;
}

// ---- 2 -------------------------------------------------------------------

Outcome flex_construction() {
  Outcome o;
  const Framework fw = named_example("square-c4");
  Matrix phi(2, 2);
  phi << 0, 1, 1, 0;
  const AffineFlex f = flex_motion_from_quadric(fw, {phi});
  o.require(std::abs(f.t - 0.5) <= 1e-12, "t = 1/2");
  const double edge = max_rel_edge_change(fw, f.flexed);
  o.require(edge <= 1e-10, "edge lengths preserved within 1e-10 relative");
  const double before = distance_matrix(fw.config())(0, 2);
  const double after = distance_matrix(f.flexed)(0, 2);
  o.require(std::abs(before - 1.41421) <= 1e-4, "original (1,3) diagonal");
  o.require(std::abs(after - 1.73205) <= 1e-4, "flexed (1,3) diagonal");
  o.require(!congruent(fw.config(), f.flexed), "flexed framework not congruent");
  o.detail << "t = " << f.t << ", max edge change " << edge << ", diagonal " << before << " -> " << after;
  return o;
}

// ---- 3 -------------------------------------------------------------------

std::vector<Framework> route_corpus() {
  std::vector<Framework> out;
  for (auto& nf : named_examples())
    if (!nf.framework.graph().is_complete()) out.push_back(std::move(nf.framework));
  for (auto& fw : testing::lateration_corpus())
    if (fw.num_nodes() <= 10) out.push_back(std::move(fw));
  for (auto& fw : testing::random_corpus(40, 2024))
    if (fw.gale_dimension() >= 1) out.push_back(std::move(fw));
  for (auto& fw : testing::flexible_corpus()) out.push_back(std::move(fw));
  return out;
}

Outcome route_equivalence() {
  Outcome o;
  Tolerances tol;
  tol.rank_rtol = 1e-9;
  int total = 0;
  int agree = 0;
  int trivial = 0;
  for (const auto& fw : route_corpus()) {
    if (fw.graph().non_edges().empty()) continue;
    ++total;
    const bool a = kernel_dim(edge_quadric_system(fw), tol) == 0;
    const bool b = kernel_dim(missing_edge_system(fw, gale_basis(fw.config(), tol).Z), tol) == 0;
    if (a == b) ++agree;
    if (a) ++trivial;
  }
  o.require(total >= 50, "at least 50 frameworks");
  o.require(agree == total, "kernel triviality agrees on every framework");
  o.detail << agree << "/" << total << " agree (" << trivial << " trivial, " << total - trivial << " nontrivial)";
  return o;
}

// ---- 4 and 5 -------------------------------------------------------------

struct LaterationRun {
  Framework fw;
  Certificate cert;
};

std::vector<LaterationRun> g_lateration;

Outcome lateration_end_to_end() {
  Outcome o;
  const Tolerances tol;
  const auto t0 = Clock::now();
  int ok = 0;
  int total = 0;
  for (auto& fw : testing::lateration_corpus()) {
    ++total;
    const int target = fw.num_nodes() - fw.dimension() - 1;
    const auto res = find_max_rank_psd_stress(fw, tol);
    bool good = res.has_value();
    if (res) {
      const StressReport rep = validate_stress(fw, res->matrix.S, tol);
      good = good && rep.psd && rep.rank == target;
    }
    Certificate c = certify(fw, tol);
    good = good && c.verdict == Verdict::UniversallyRigid && c.route == Route::GeneralPositionStress;
    good = good && c.hypotheses.canonical_system_full_rank == true;
    if (c.canonical_gale) {
      const CanonicalGaleMatrix zh{*c.canonical_gale, assemble_stress(fw, {*c.omega}, tol)};
      const Matrix sys = missing_edge_system_canonical(fw, zh);
      good = good && numeric_rank(sys, tol) == sys.cols();
    } else {
      good = false;
    }
    if (good) ++ok;
    else o.require(false, "n=" + std::to_string(fw.num_nodes()) + " r=" + std::to_string(fw.dimension()));
    g_lateration.push_back({std::move(fw), std::move(c)});
  }
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 60.0, "total runtime under 60 s");
  o.detail << ok << "/" << total << " certified with full-rank canonical system in " << elapsed << " s";
  return o;
}

Outcome canonical_zero_pattern() {
  Outcome o;
  const Tolerances tol;
  double worst = 0.0;
  int zeros = 0;
  int checked = 0;
  for (const auto& run : g_lateration) {
    if (run.cert.verdict != Verdict::UniversallyRigid || !run.cert.omega) continue;
    const Framework& fw = run.fw;
    const StressMatrix S = assemble_stress(fw, {*run.cert.omega}, tol);
    const Matrix zh = canonical_gale(fw, S, tol).Z;
    const int r = fw.dimension();
    ++checked;
    for (int j = 0; j < zh.cols(); ++j)
      for (int i : fw.graph().non_neighbors(j + r + 1)) {
        o.require(zh(i, j) == 0.0, "zero at a non-neighbour entry");
        ++zeros;
      }
    worst = std::max(worst, (augmented_matrix(fw.config()) * zh).cwiseAbs().maxCoeff());
  }
  o.require(checked == static_cast<int>(g_lateration.size()) && checked > 0, "every instance of (4) checked");
  o.require(worst <= 1e-8, "A Z_hat within 1e-8");
  o.detail << checked << " instances, " << zeros << " exact zeros, max |A Z_hat| " << worst;
  return o;
}

// ---- 6 -------------------------------------------------------------------

Outcome degree_screen() {
  Outcome o;
  testing::Rng rng(606);
  int none = 0;
  for (int k = 0; k < 20; ++k) {
    const Framework fw = testing::low_degree_framework(rng);
    o.require(!min_degree_check(fw), "framework has a node of degree <= r");
    if (!find_max_rank_psd_stress(fw)) ++none;
  }
  o.require(none == 20, "no stress found on any framework");
  o.detail << none << "/20 returned none";
  return o;
}

// ---- 7 -------------------------------------------------------------------

Outcome refutation_coupling() {
  Outcome o;
  const auto t0 = Clock::now();
  int clean = 0;
  int rigid = 0;
  for (const auto& nf : named_examples()) {
    if (certify(nf.framework).verdict != Verdict::UniversallyRigid) continue;
    ++rigid;
    const int r = nf.framework.dimension();
    const auto res = refute_by_search(nf.framework, {r, r + 1, r + 2}, 50, 0);
    if (!res) ++clean;
    else o.require(false, nf.name + " refuted");
  }
  const auto c4 = refute_by_search(named_example("square-c4"), {2, 3, 4}, 20, 0);
  o.require(c4.has_value(), "square-c4 refuted within 20 restarts");
  if (c4) {
    o.require(c4->residual <= 1e-12, "residual <= 1e-12");
    o.require(c4->gap >= 1e-6, "congruence gap >= 1e-6");
    o.detail << "square-c4: dim " << c4->dimension << " restart " << c4->restart << " residual "
             << c4->residual << " gap " << c4->gap << "; ";
  }
  o.require(rigid == 3, "three universally rigid fixtures");
  o.detail << clean << "/" << rigid << " rigid fixtures unrefuted, " << seconds_since(t0) << " s";
  return o;
}

// ---- 8 -------------------------------------------------------------------

Outcome certificate_integrity() {
  Outcome o;
  std::vector<LaterationRun> all;
  for (auto& nf : named_examples()) {
    Certificate c = certify(nf.framework);
    all.push_back({std::move(nf.framework), std::move(c)});
  }
  for (const auto& run : g_lateration) all.push_back(run);

  int accepted = 0;
  int sign_rejected = 0;
  int sign_total = 0;
  int point_rejected = 0;
  int digest_rejected = 0;
  for (const auto& [fw, cert] : all) {
    if (verify_certificate(fw, cert)) ++accepted;

    if (cert.omega && cert.hypotheses.stress_found) {
      ++sign_total;
      Certificate t = cert;
      *t.omega = -*t.omega;
      if (!verify_certificate(fw, t)) ++sign_rejected;
    }

    Matrix p = fw.config().points();
    p(0, 0) += 1e-3;
    if (!verify_certificate(Framework(fw.graph(), Configuration(p)), cert)) ++point_rejected;

    Certificate d = cert;
    d.framework_digest = framework_digest(named_example(fw == named_example("square-k4") ? "square-c4" : "square-k4"));
    if (!verify_certificate(fw, d)) ++digest_rejected;
  }
  const int n = static_cast<int>(all.size());
  o.require(accepted == n, "all generated certificates accepted");
  o.require(sign_rejected == sign_total && sign_total > 0, "sign-flipped omega rejected");
  o.require(point_rejected == n, "edited point rejected");
  o.require(digest_rejected == n, "mismatched digest rejected");
  o.detail << accepted << "/" << n << " accepted; rejected: sign-flip " << sign_rejected << "/" << sign_total
           << ", edited point " << point_rejected << "/" << n << ", digest " << digest_rejected << "/" << n;
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"fixture verdicts", fixture_verdicts},
      {"flex construction on square-c4", flex_construction},
      {"quadric and missing-edge routes agree", route_equivalence},
      {"lateration corpus certified end to end", lateration_end_to_end},
      {"canonical Gale zero pattern", canonical_zero_pattern},
      {"degree screen", degree_screen},
      {"refutation coupling", refutation_coupling},
      {"certificate integrity", certificate_integrity},
  };
  int failed = 0;
  const auto t0 = Clock::now();
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    if (!o.pass) ++failed;
    std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed in %.1f s\n", static_cast<int>(criteria.size()) - failed, criteria.size(),
              seconds_since(t0));
  return failed == 0 ? 0 : 1;
}
