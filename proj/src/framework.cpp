#include "urigid/framework.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "urigid/gale.hpp"

namespace urigid {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n) {
  if (n < 1) throw Error("graph: node count must be at least 1");
  const auto un = static_cast<std::size_t>(n);
  adj_.assign(un * un, 0);
  degree_.assign(un, 0);
  for (auto& [i, j] : edges) {
    if (i < 0 || j < 0 || i >= n || j >= n)
      throw Error("graph: edge (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                  ") references a node outside 1.." + std::to_string(n));
    if (i == j) throw Error("graph: loop at node " + std::to_string(i + 1));
    if (i > j) std::swap(i, j);
    auto& slot = adj_[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)];
    if (slot) throw Error("graph: duplicate edge (" + std::to_string(i + 1) + "," +
                          std::to_string(j + 1) + ")");
    slot = 1;
    adj_[static_cast<std::size_t>(j) * un + static_cast<std::size_t>(i)] = 1;
    ++degree_[static_cast<std::size_t>(i)];
    ++degree_[static_cast<std::size_t>(j)];
  }
  std::sort(edges.begin(), edges.end());
  edges_ = std::move(edges);

  // Connectivity by DFS from node 0.
  std::vector<char> seen(un, 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int reached = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w = 0; w < n; ++w) {
      if (!seen[static_cast<std::size_t>(w)] && adjacent(v, w)) {
        seen[static_cast<std::size_t>(w)] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  if (reached != n) throw Error("graph: graph is not connected");
}

bool Graph::is_complete() const {
  return static_cast<long long>(edges_.size()) ==
         static_cast<long long>(n_) * (n_ - 1) / 2;
}

int Graph::edge_index(int i, int j) const {
  if (i > j) std::swap(i, j);
  const auto it = std::lower_bound(edges_.begin(), edges_.end(), Edge{i, j});
  if (it == edges_.end() || *it != Edge{i, j}) return -1;
  return static_cast<int>(it - edges_.begin());
}

std::vector<Edge> Graph::non_edges() const {
  std::vector<Edge> out;
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if (!adjacent(i, j)) out.emplace_back(i, j);
  return out;
}

std::vector<int> Graph::non_neighbors(int i) const {
  std::vector<int> out;
  for (int j = 0; j < n_; ++j)
    if (j != i && !adjacent(i, j)) out.push_back(j);
  return out;
}

Configuration::Configuration(Matrix points) : points_(std::move(points)) {
  if (points_.rows() < 1) throw Error("configuration: dimension must be at least 1");
  if (points_.cols() < 1) throw Error("configuration: at least one point is required");
  require_finite(points_, "configuration");
}

Framework::Framework(Graph graph, Configuration config)
    : graph_(std::move(graph)), config_(std::move(config)) {
  if (graph_.num_nodes() != config_.num_points())
    throw Error("framework: graph has " + std::to_string(graph_.num_nodes()) +
                " nodes but configuration has " + std::to_string(config_.num_points()) +
                " points");
}

Matrix augmented_matrix(const Configuration& config) {
  const int r = config.dimension();
  const int n = config.num_points();
  Matrix a(r + 1, n);
  a.topRows(r) = config.points();
  a.row(r).setOnes();
  return a;
}

bool check_spanning(const Configuration& config, const Tolerances& tol) {
  return numeric_rank(augmented_matrix(config), tol) == config.dimension() + 1;
}

bool is_general_position_by_determinants(const Configuration& config, const Tolerances& tol) {
  const int r = config.dimension();
  const int n = config.num_points();
  if (n < r + 1) return false;
  const Matrix a = augmented_matrix(config);
  Matrix sub(r + 1, r + 1);
  return for_each_subset(n, r + 1, [&](const std::vector<int>& idx) {
    double norm_product = 1.0;
    for (int c = 0; c <= r; ++c) {
      sub.col(c) = a.col(idx[static_cast<std::size_t>(c)]);
      norm_product *= sub.col(c).norm();
    }
    const double det = sub.partialPivLu().determinant();
    return std::abs(det) > tol.rank_rtol * norm_product;
  });
}

bool is_general_position(const Configuration& config, const Tolerances& tol,
                         std::uint64_t cap, std::uint64_t gale_cap) {
  const int r = config.dimension();
  const int n = config.num_points();
  if (!check_spanning(config, tol)) return false;
  if (binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r + 1)) <= cap)
    return is_general_position_by_determinants(config, tol);
  // C(n, r+1) == C(n, n-1-r): the Gale route enumerates as many subsets.
  const int rbar = n - 1 - r;
  if (binomial(static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(rbar)) > gale_cap)
    throw Error("is_general_position: subset count exceeds both enumeration caps");
  return gale_general_position_by_submatrices(gale_basis(config, tol).Z, tol);
}

bool min_degree_check(const Framework& fw) {
  const int need = fw.dimension() + 1;
  for (int i = 0; i < fw.num_nodes(); ++i)
    if (fw.graph().degree(i) < need) return false;
  return true;
}

std::vector<double> distance_profile(const Framework& fw) {
  std::vector<double> out;
  out.reserve(fw.graph().edges().size());
  const auto& p = fw.config().points();
  for (const auto& [i, j] : fw.graph().edges()) out.push_back((p.col(i) - p.col(j)).norm());
  return out;
}

Matrix distance_matrix(const Configuration& config) {
  const int n = config.num_points();
  Matrix d = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) = (config.point(i) - config.point(j)).norm();
  return d;
}

bool equivalent(const Framework& a, const Framework& b, const Tolerances& tol) {
  if (!(a.graph() == b.graph())) throw Error("equivalent: frameworks have different graphs");
  const auto da = distance_profile(a);
  const auto db = distance_profile(b);
  double scale = 0.0;
  double worst = 0.0;
  for (std::size_t k = 0; k < da.size(); ++k) {
    scale = std::max(scale, da[k]);
    worst = std::max(worst, std::abs(da[k] - db[k]));
  }
  return worst <= tol.residual_atol * std::max(scale, 1e-300);
}

double congruence_gap(const Configuration& a, const Configuration& b) {
  if (a.num_points() != b.num_points())
    throw Error("congruent: configurations have different point counts");
  const Matrix da = distance_matrix(a);
  const Matrix db = distance_matrix(b);
  const double scale = max_abs(da);
  const double worst = max_abs(da - db);
  if (scale == 0.0) return worst == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return worst / scale;
}

bool congruent(const Configuration& a, const Configuration& b, const Tolerances& tol) {
  return congruence_gap(a, b) <= tol.residual_atol;
}

Framework relabel(const Framework& fw, const std::vector<int>& perm) {
  const int n = fw.num_nodes();
  if (static_cast<int>(perm.size()) != n) throw Error("relabel: permutation has wrong size");
  std::vector<int> check(perm);
  std::sort(check.begin(), check.end());
  for (int i = 0; i < n; ++i)
    if (check[static_cast<std::size_t>(i)] != i) throw Error("relabel: not a permutation");
  Matrix pts(fw.dimension(), n);
  for (int i = 0; i < n; ++i) pts.col(perm[static_cast<std::size_t>(i)]) = fw.config().point(i);
  std::vector<Edge> edges;
  for (const auto& [i, j] : fw.graph().edges())
    edges.emplace_back(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  return Framework(Graph(n, std::move(edges)), Configuration(std::move(pts)));
}

}  // namespace urigid
