#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "urigid/certify.hpp"

namespace urigid {

namespace {

struct EdgeObjective {
  std::vector<Edge> edges;
  std::vector<double> target;  // squared edge lengths
  double scale4 = 1.0;         // diameter^4

  double value(const Matrix& q) const {
    double f = 0.0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const double r = (q.col(edges[k].first) - q.col(edges[k].second)).squaredNorm() - target[k];
      f += r * r;
    }
    return f / scale4;
  }

  double value_and_gradient(const Matrix& q, Matrix& grad) const {
    grad.setZero(q.rows(), q.cols());
    double f = 0.0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      const auto [i, j] = edges[k];
      const Vector d = q.col(i) - q.col(j);
      const double r = d.squaredNorm() - target[k];
      f += r * r;
      grad.col(i) += (4.0 * r) * d;
      grad.col(j) -= (4.0 * r) * d;
    }
    grad /= scale4;
    return f / scale4;
  }
};

EdgeObjective make_objective(const Framework& fw) {
  EdgeObjective obj;
  obj.edges = fw.graph().edges();
  const auto& p = fw.config().points();
  for (const auto& [i, j] : obj.edges) obj.target.push_back((p.col(i) - p.col(j)).squaredNorm());
  const double diam = max_abs(distance_matrix(fw.config()));
  obj.scale4 = diam > 0.0 ? std::pow(diam, 4) : 1.0;
  return obj;
}

// Gradient descent with Armijo backtracking. Returns the final residual.
double descend(const EdgeObjective& obj, Matrix& q, const RefuteOptions& opts) {
  Matrix grad;
  Matrix trial;
  double f = obj.value_and_gradient(q, grad);
  double step = 1.0;
  for (int it = 0; it < opts.max_iterations && f > opts.residual_tol; ++it) {
    const double g2 = grad.squaredNorm();
    if (g2 == 0.0) break;
    step *= 2.0;
    double ft = 0.0;
    while (true) {
      trial = q - step * grad;
      ft = obj.value(trial);
      if (ft <= f - 1e-4 * step * g2) break;
      step *= 0.5;
      if (step < 1e-30) return f;
    }
    q.swap(trial);
    f = obj.value_and_gradient(q, grad);
  }
  return f;
}

}  // namespace

double equivalence_residual(const Framework& fw, const Matrix& q) {
  if (q.cols() != fw.num_nodes()) throw Error("equivalence_residual: wrong point count");
  return make_objective(fw).value(q);
}

std::optional<Refutation> refute_by_search(const Framework& fw, const std::vector<int>& dims,
                                           int restarts, std::uint64_t seed, const RefuteOptions& opts) {
  const EdgeObjective obj = make_objective(fw);
  const int n = fw.num_nodes();
  const int r = fw.dimension();
  const double diam = max_abs(distance_matrix(fw.config()));
  const auto& p = fw.config().points();

  for (const int s : dims) {
    if (s < 1) throw Error("refute_by_search: target dimensions must be positive");
    std::vector<std::optional<Refutation>> found(static_cast<std::size_t>(std::max(restarts, 0)));
    auto run = [&](int restart) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(restart)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> noise(-opts.perturbation * diam, opts.perturbation * diam);
      Matrix q = Matrix::Zero(s, n);
      q.topRows(std::min(r, s)) = p.topRows(std::min(r, s));
      for (Eigen::Index k = 0; k < q.size(); ++k) q.data()[k] += noise(rng);
      const double res = descend(obj, q, opts);
      if (!(res <= opts.residual_tol)) return;
      Configuration candidate(std::move(q));
      const double gap = congruence_gap(fw.config(), candidate);
      if (gap >= opts.gap_threshold)
        found[static_cast<std::size_t>(restart)] = Refutation{std::move(candidate), s, restart, res, gap};
    };
    const int jobs = std::clamp(opts.jobs, 1, std::max(restarts, 1));
    if (jobs == 1) {
      for (int k = 0; k < restarts; ++k) {
        run(k);
        if (found[static_cast<std::size_t>(k)]) break;
      }
    } else {
      std::vector<std::jthread> workers;
      for (int w = 0; w < jobs; ++w)
        workers.emplace_back([&, w] {
          for (int k = w; k < restarts; k += jobs) run(k);
        });
    }
    for (auto& f : found)
      if (f) return std::move(*f);
  }
  return std::nullopt;
}

}  // namespace urigid
