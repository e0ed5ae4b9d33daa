#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "urigid/framework.hpp"
#include "urigid/generators.hpp"

namespace testing {

using urigid::Framework;
using urigid::Matrix;
using urigid::Vector;

// splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : s_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int below(int k) { return static_cast<int>(next() % static_cast<std::uint64_t>(k)); }

  Matrix matrix(int rows, int cols, double lo = -1.0, double hi = 1.0) {
    Matrix m(rows, cols);
    for (int j = 0; j < cols; ++j)
      for (int i = 0; i < rows; ++i) m(i, j) = uniform(lo, hi);
    return m;
  }

  std::vector<int> permutation(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i) std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(below(i + 1))]);
    return p;
  }

 private:
  std::uint64_t s_;
};

inline Framework unit_square(const urigid::Graph& g) {
  Matrix p(2, 4);
  p << 0, 1, 1, 0,
       0, 0, 1, 1;
  return Framework(g, urigid::Configuration(p));
}

inline Framework k4_square() { return unit_square(urigid::complete_graph(4)); }
inline Framework c4_square() { return unit_square(urigid::cycle_graph(4)); }

inline Framework k3_line() {
  Matrix p(1, 3);
  p << 0, 1, 2;
  return Framework(urigid::complete_graph(3), urigid::Configuration(p));
}

// Lateration corpus: r in {2,3}, 20 seeds each, 5 <= n <= 15.
inline std::vector<Framework> lateration_corpus() {
  std::vector<Framework> out;
  for (int r = 2; r <= 3; ++r)
    for (int seed = 0; seed < 20; ++seed) {
      const int n = r + 3 + seed % (13 - r);
      out.emplace_back(urigid::lateration_graph(n, r), urigid::random_general_position(n, r, 1000u * r + seed));
    }
  return out;
}

// Random connected, non-complete frameworks on general-position points,
// mixing sparse (flexible) and dense graphs.
inline std::vector<Framework> random_corpus(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Framework> out;
  while (static_cast<int>(out.size()) < count) {
    const int r = 1 + rng.below(3);
    const int n = r + 2 + rng.below(5);
    const double density = rng.uniform(0.0, 0.9);
    const std::uint64_t s = rng.next();
    urigid::Graph g = urigid::random_connected_graph(n, density, s);
    if (g.is_complete()) continue;
    out.emplace_back(std::move(g), urigid::random_general_position(n, r, s));
  }
  return out;
}

// A dense core plus one node joined to between 1 and r others.
inline Framework low_degree_framework(Rng& rng) {
  const int r = 2 + rng.below(2);
  const int n = r + 4 + rng.below(4);
  const urigid::Graph core = urigid::random_connected_graph(n - 1, 0.9, rng.next());
  std::vector<urigid::Edge> edges = core.edges();
  const int deg = 1 + rng.below(r);
  for (int j : rng.permutation(n - 1)) {
    if (static_cast<int>(edges.size()) - core.num_edges() == deg) break;
    edges.emplace_back(j, n - 1);
  }
  return Framework(urigid::Graph(n, edges), urigid::random_general_position(n, r, rng.next()));
}

// Frameworks with a nontrivial quadric at infinity: spanning trees and
// 5-cycles in R^3 (at most 5 edge directions), and axis-aligned grids.
inline std::vector<Framework> flexible_corpus() {
  std::vector<Framework> out;
  for (int seed = 0; seed < 4; ++seed) {
    const int n = 5 + seed % 2;
    out.emplace_back(urigid::random_connected_graph(n, 0.0, 100 + seed), urigid::random_general_position(n, 3, 200 + seed));
  }
  out.emplace_back(urigid::cycle_graph(5), urigid::random_general_position(5, 3, 300));
  for (int rows = 2; rows <= 3; ++rows) {
    const int n = 3 * rows;
    Matrix p(2, n);
    std::vector<urigid::Edge> edges;
    for (int a = 0; a < rows; ++a)
      for (int b = 0; b < 3; ++b) {
        const int i = 3 * a + b;
        p(0, i) = b + 0.1 * a * a;
        p(1, i) = a + 0.2 * b * b;
        if (b + 1 < 3) edges.emplace_back(i, i + 1);
        if (a + 1 < rows) edges.emplace_back(i, i + 3);
      }
    out.emplace_back(urigid::Graph(n, edges), urigid::Configuration(p));
  }
  return out;
}

// Largest entry of X minus its least-squares projection onto span(B).
inline double span_residual(const Matrix& X, const Matrix& B) {
  const Matrix coeffs = B.colPivHouseholderQr().solve(X);
  return (X - B * coeffs).cwiseAbs().maxCoeff();
}

}  // namespace testing
