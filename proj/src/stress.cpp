#include "urigid/stress.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "urigid/gale.hpp"

namespace urigid {

Matrix equilibrium_system(const Framework& fw) {
  const int r = fw.dimension();
  const int n = fw.num_nodes();
  const auto& edges = fw.graph().edges();
  const auto& p = fw.config().points();
  Matrix sys = Matrix::Zero(static_cast<Eigen::Index>(r) * n, static_cast<Eigen::Index>(edges.size()));
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto [i, j] = edges[k];
    const Vector d = p.col(i) - p.col(j);
    const auto col = static_cast<Eigen::Index>(k);
    sys.block(static_cast<Eigen::Index>(r) * i, col, r, 1) = d;
    sys.block(static_cast<Eigen::Index>(r) * j, col, r, 1) = -d;
  }
  return sys;
}

std::vector<EquilibriumStress> stress_space_basis(const Framework& fw, const Tolerances& tol) {
  const Matrix basis = nullspace_basis(equilibrium_system(fw), tol);
  std::vector<EquilibriumStress> out;
  out.reserve(static_cast<std::size_t>(basis.cols()));
  for (Eigen::Index c = 0; c < basis.cols(); ++c) out.push_back({basis.col(c)});
  return out;
}

namespace {

Matrix raw_stress_matrix(const Framework& fw, const Vector& omega) {
  const int n = fw.num_nodes();
  const auto& edges = fw.graph().edges();
  if (omega.size() != static_cast<Eigen::Index>(edges.size()))
    throw Error("stress: omega has " + std::to_string(omega.size()) + " entries but the graph has " +
                std::to_string(edges.size()) + " edges");
  require_finite(omega, "stress");
  Matrix s = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const auto [i, j] = edges[k];
    const double w = omega(static_cast<Eigen::Index>(k));
    s(i, j) = -w;
    s(j, i) = -w;
    s(i, i) += w;
    s(j, j) += w;
  }
  return s;
}

double annihilation_residual(const Matrix& a, const Matrix& s) {
  const double scale = std::max(1.0, max_abs(a)) * max_abs(s);
  if (scale == 0.0) return 0.0;
  return max_abs(a * s) / scale;
}

}  // namespace

double equilibrium_residual(const Framework& fw, const EquilibriumStress& w) {
  return annihilation_residual(augmented_matrix(fw.config()), raw_stress_matrix(fw, w.omega));
}

StressMatrix assemble_stress(const Framework& fw, const EquilibriumStress& w, const Tolerances& tol) {
  Matrix s = raw_stress_matrix(fw, w.omega);
  const double res = annihilation_residual(augmented_matrix(fw.config()), s);
  if (res > tol.residual_atol)
    throw Error("assemble_stress: omega is not an equilibrium stress (relative residual " +
                std::to_string(res) + ")");
  return {std::move(s)};
}

StressReport validate_stress(const Framework& fw, const Matrix& S, const Tolerances& tol) {
  const int n = fw.num_nodes();
  if (S.rows() != n || S.cols() != n)
    throw Error("validate_stress: expected a " + std::to_string(n) + "x" + std::to_string(n) +
                " matrix");
  require_finite(S, "validate_stress");
  StressReport rep;
  const double scale = max_abs(S);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && !fw.graph().adjacent(i, j))
        rep.max_off_pattern = std::max(rep.max_off_pattern, std::abs(S(i, j)));
  rep.max_row_sum = S.rows() ? S.rowwise().sum().cwiseAbs().maxCoeff() : 0.0;
  rep.asymmetry = max_abs(S - S.transpose());
  const Matrix a = augmented_matrix(fw.config());
  rep.annihilation = max_abs(a * S);

  const double bound = tol.residual_atol * scale;
  rep.pattern_ok = rep.max_off_pattern <= bound && rep.asymmetry <= bound;
  rep.equilibrium_ok = annihilation_residual(a, S) <= tol.residual_atol;

  rep.rank = numeric_rank(S, tol);
  rep.target_rank = fw.gale_dimension();
  const Matrix sym = 0.5 * (S + S.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  rep.eigenvalues = es.eigenvalues();
  rep.lambda_min = rep.eigenvalues.size() ? rep.eigenvalues.minCoeff() : 0.0;
  rep.lambda_max = rep.eigenvalues.size() ? rep.eigenvalues.maxCoeff() : 0.0;
  rep.psd = is_psd(rep.eigenvalues, tol);
  rep.max_rank = rep.rank == rep.target_rank;
  return rep;
}

Matrix recover_psi(const StressMatrix& S, const Matrix& Z, const Tolerances& tol) {
  if (Z.rows() != S.S.rows()) throw Error("recover_psi: Z and S have different row counts");
  if (numeric_rank(Z, tol) != Z.cols()) throw Error("recover_psi: Z is not of full column rank");
  const Matrix gram = Z.transpose() * Z;
  const Eigen::LDLT<Matrix> ldlt(gram);
  const Matrix left = ldlt.solve(Z.transpose() * S.S * Z);
  Matrix psi = ldlt.solve(left.transpose()).transpose();
  psi = 0.5 * (psi + psi.transpose());
  const double scale = max_abs(S.S);
  const double res = max_abs(Z * psi * Z.transpose() - S.S);
  if (res > tol.residual_atol * std::max(scale, 1e-300) && res > 0.0)
    throw Error("recover_psi: S is not of the form Z Psi Z^T (residual " + std::to_string(res) + ")");
  return psi;
}

namespace {

LambdaMinAscent ascend_from(const std::vector<Matrix>& psis, const StressSearchOptions& opts,
                            int restart) {
  const auto dim = static_cast<Eigen::Index>(psis.size());
  const Eigen::Index size = psis.front().rows();
  std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(dim);
  do {
    for (Eigen::Index k = 0; k < dim; ++k) x(k) = normal(rng);
  } while (x.norm() == 0.0);
  x.normalize();

  LambdaMinAscent best;
  best.restart = restart;
  Matrix m(size, size);
  Vector g(dim);
  Eigen::SelfAdjointEigenSolver<Matrix> es(size);
  for (int it = 1; it <= opts.iterations; ++it) {
    m.setZero();
    for (Eigen::Index k = 0; k < dim; ++k) m.noalias() += x(k) * psis[static_cast<std::size_t>(k)];
    es.compute(m);
    const double value = es.eigenvalues()(0);
    if (value > best.objective) {
      best.objective = value;
      best.x = x;
    }
    const auto u = es.eigenvectors().col(0);
    for (Eigen::Index k = 0; k < dim; ++k)
      g(k) = u.dot(psis[static_cast<std::size_t>(k)] * u);
    const double gnorm = g.norm();
    if (gnorm == 0.0) break;
    x += (opts.step / std::sqrt(static_cast<double>(it))) * (g / gnorm);
    const double xnorm = x.norm();
    if (xnorm > 1.0) x /= xnorm;
  }
  return best;
}

}  // namespace

LambdaMinAscent maximize_min_eigenvalue(const std::vector<Matrix>& psis,
                                        const StressSearchOptions& opts) {
  LambdaMinAscent best;
  if (psis.empty() || opts.restarts < 1) return best;
  std::vector<LambdaMinAscent> results(static_cast<std::size_t>(opts.restarts));
  const int jobs = std::clamp(opts.jobs, 1, opts.restarts);
  if (jobs == 1) {
    for (int r = 0; r < opts.restarts; ++r)
      results[static_cast<std::size_t>(r)] = ascend_from(psis, opts, r);
  } else {
    std::vector<std::jthread> workers;
    for (int w = 0; w < jobs; ++w)
      workers.emplace_back([&, w] {
        for (int r = w; r < opts.restarts; r += jobs)
          results[static_cast<std::size_t>(r)] = ascend_from(psis, opts, r);
      });
  }
  // Strict comparison keeps the lowest restart index on ties.
  for (const auto& res : results)
    if (res.objective > best.objective) best = res;
  return best;
}

std::optional<StressSearchResult> find_max_rank_psd_stress(const Framework& fw, const Tolerances& tol,
                                                           const StressSearchOptions& opts) {
  if (fw.gale_dimension() < 1)
    throw Error("find_max_rank_psd_stress: requires n - r - 1 >= 1");
  const auto basis = stress_space_basis(fw, tol);
  if (basis.empty()) return std::nullopt;
  const Matrix Z = gale_basis(fw.config(), tol).Z;

  std::vector<Matrix> psis;
  psis.reserve(basis.size());
  for (const auto& w : basis) psis.push_back(recover_psi(assemble_stress(fw, w, tol), Z, tol));

  const LambdaMinAscent best = maximize_min_eigenvalue(psis, opts);
  if (!(best.objective > 10.0 * tol.psd_atol)) return std::nullopt;

  Vector omega = Vector::Zero(basis.front().omega.size());
  for (std::size_t k = 0; k < basis.size(); ++k)
    omega += best.x(static_cast<Eigen::Index>(k)) * basis[k].omega;
  omega /= omega.norm();

  EquilibriumStress stress{omega};
  StressMatrix matrix = assemble_stress(fw, stress, tol);
  if (!validate_stress(fw, matrix.S, tol).certifies()) return std::nullopt;
  return StressSearchResult{std::move(stress), std::move(matrix), best.objective, best.restart};
}

}  // namespace urigid
