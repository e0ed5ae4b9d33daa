#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "urigid/numerics.hpp"

namespace urigid {

/// Unordered node pair, 0-based, always stored with first < second.
using Edge = std::pair<int, int>;

/// Simple connected graph on nodes 0..n-1. Edges are kept sorted.
class Graph {
 public:
  /// Validates and canonicalizes. Throws Error on loops, duplicates,
  /// out-of-range labels or a disconnected graph.
  Graph(int n, std::vector<Edge> edges);

  int num_nodes() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  bool adjacent(int i, int j) const {
    return adj_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                static_cast<std::size_t>(j)] != 0;
  }
  int degree(int i) const { return degree_[static_cast<std::size_t>(i)]; }
  bool is_complete() const;

  /// Index of edge (i,j) in edges(), or -1.
  int edge_index(int i, int j) const;

  /// All non-adjacent pairs (i < j), lexicographically sorted.
  std::vector<Edge> non_edges() const;

  /// Nodes j != i that are not adjacent to i.
  std::vector<int> non_neighbors(int i) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<unsigned char> adj_;
  std::vector<int> degree_;
};

/// Points p^1..p^n in R^r, stored as the columns of an r x n matrix.
class Configuration {
 public:
  explicit Configuration(Matrix points);

  int dimension() const { return static_cast<int>(points_.rows()); }
  int num_points() const { return static_cast<int>(points_.cols()); }
  const Matrix& points() const { return points_; }
  auto point(int i) const { return points_.col(i); }

  friend bool operator==(const Configuration& a, const Configuration& b) {
    return a.points_.rows() == b.points_.rows() && a.points_.cols() == b.points_.cols() &&
           a.points_ == b.points_;
  }

 private:
  Matrix points_;
};

class Framework {
 public:
  /// Throws Error unless graph and configuration have the same node count.
  Framework(Graph graph, Configuration config);

  const Graph& graph() const { return graph_; }
  const Configuration& config() const { return config_; }
  int num_nodes() const { return graph_.num_nodes(); }
  int dimension() const { return config_.dimension(); }
  /// n - 1 - r: the Gale dimension and the maximum stress-matrix rank.
  int gale_dimension() const { return num_nodes() - 1 - dimension(); }

  friend bool operator==(const Framework& a, const Framework& b) {
    return a.graph_ == b.graph_ && a.config_ == b.config_;
  }

 private:
  Graph graph_;
  Configuration config_;
};

/// (r+1) x n matrix whose column i is p^i stacked on 1.
Matrix augmented_matrix(const Configuration& config);

/// Affine span check: numeric_rank(augmented_matrix) == r + 1.
bool check_spanning(const Configuration& config, const Tolerances& tol = {});

/// Default number of subsets either general-position route may enumerate.
inline constexpr std::uint64_t kDefaultSubsetCap = 100000;

/// True iff every (r+1)-subset of points is affinely independent. Uses
/// determinants of augmented columns when C(n, r+1) <= cap, otherwise the
/// Gale-side test with `gale_cap`. Throws Error when both caps are exceeded.
bool is_general_position(const Configuration& config, const Tolerances& tol = {},
                         std::uint64_t cap = kDefaultSubsetCap,
                         std::uint64_t gale_cap = kDefaultSubsetCap);

/// Determinant route only, no fallback.
bool is_general_position_by_determinants(const Configuration& config, const Tolerances& tol);

/// deg(i) >= r + 1 for every node.
bool min_degree_check(const Framework& fw);

/// Edge lengths aligned with fw.graph().edges().
std::vector<double> distance_profile(const Framework& fw);

/// Full n x n Euclidean distance matrix.
Matrix distance_matrix(const Configuration& config);

/// Same graph, edge lengths equal within residual_atol relative to the
/// largest edge length. Ambient dimensions may differ.
bool equivalent(const Framework& a, const Framework& b, const Tolerances& tol = {});

/// All pairwise distances equal within residual_atol relative to the
/// largest distance. Ambient dimensions may differ.
bool congruent(const Configuration& a, const Configuration& b, const Tolerances& tol = {});

/// max_ij |d_a(i,j) - d_b(i,j)| / max_ij d_a(i,j).
double congruence_gap(const Configuration& a, const Configuration& b);

/// Relabels nodes: node i of the input becomes node perm[i] of the result.
Framework relabel(const Framework& fw, const std::vector<int>& perm);

}  // namespace urigid
