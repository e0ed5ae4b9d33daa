#include "urigid/generators.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace urigid {

namespace {

std::mt19937_64 seeded(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

Framework square(Graph g) {
  Matrix p(2, 4);
  p << 0, 1, 1, 0,
       0, 0, 1, 1;
  return Framework(std::move(g), Configuration(std::move(p)));
}

}  // namespace

Graph complete_graph(int n) {
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph(n, std::move(edges));
}

Graph cycle_graph(int n) {
  if (n < 3) throw Error("cycle_graph: n must be at least 3");
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph(n, std::move(edges));
}

Graph lateration_graph(int n, int r) {
  if (r < 1) throw Error("lateration_graph: r must be at least 1");
  if (n < r + 2) throw Error("lateration_graph: n must be at least r + 2");
  std::vector<Edge> edges;
  for (int i = 0; i <= r; ++i)
    for (int j = i + 1; j <= r; ++j) edges.emplace_back(i, j);
  for (int k = r + 1; k < n; ++k)
    for (int j = k - (r + 1); j < k; ++j) edges.emplace_back(j, k);
  return Graph(n, std::move(edges));
}

Graph random_connected_graph(int n, double density, std::uint64_t seed) {
  if (n < 2) throw Error("random_connected_graph: n must be at least 2");
  auto rng = seeded(seed, 0x9e37u);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<unsigned char> used(static_cast<std::size_t>(n * n), 0);
  std::vector<Edge> edges;
  auto add = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    auto& u = used[static_cast<std::size_t>(a * n + b)];
    if (!u) {
      u = 1;
      edges.emplace_back(a, b);
    }
  };
  for (int k = 1; k < n; ++k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    add(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(pick(rng))]);
  }
  std::bernoulli_distribution coin(std::clamp(density, 0.0, 1.0));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) add(i, j);
  return Graph(n, std::move(edges));
}

Configuration random_general_position(int n, int r, std::uint64_t seed, const Tolerances& tol) {
  if (r < 1) throw Error("random_general_position: r must be at least 1");
  if (n < r + 1)
    throw Error("random_general_position: " + std::to_string(n) + " points cannot span R^" +
                std::to_string(r));
  auto rng = seeded(seed, 0x51u);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Matrix p(r, n);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < r; ++a) p(a, i) = unit(rng);
    Configuration config(std::move(p));
    if (is_general_position(config, tol)) return config;
  }
  throw Error("random_general_position: no general-position sample within 1000 attempts");
}

std::vector<NamedFramework> named_examples() {
  std::vector<NamedFramework> out;
  out.push_back({"square-k4", square(complete_graph(4))});
  out.push_back({"square-c4", square(cycle_graph(4))});
  {
    Matrix p(1, 3);
    p << 0, 1, 2;
    out.push_back({"k3-line", Framework(complete_graph(3), Configuration(std::move(p)))});
  }
  {
    // Points 1, 2, 3 are collinear; the graph is K4 minus the edge (1,3).
    Matrix p(2, 4);
    p << 0, 1, 2, 0,
         0, 0, 0, 1;
    Graph g(4, {{0, 1}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
    out.push_back({"collinear-bad-gp", Framework(std::move(g), Configuration(std::move(p)))});
  }
  out.push_back({"lateration-5-2", Framework(lateration_graph(5, 2), random_general_position(5, 2, 7))});
  return out;
}

Framework named_example(const std::string& name) {
  for (auto& nf : named_examples())
    if (nf.name == name) return std::move(nf.framework);
  throw Error("unknown named example '" + name + "'");
}

GeneratorSpec parse_generator_spec(const std::string& text) {
  GeneratorSpec spec;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "complete") spec.kind = GeneratorKind::Complete;
  else if (kind == "cycle") spec.kind = GeneratorKind::Cycle;
  else if (kind == "lateration") spec.kind = GeneratorKind::Lateration;
  else if (kind == "random-gp") spec.kind = GeneratorKind::RandomGp;
  else if (kind == "named") spec.kind = GeneratorKind::Named;
  else throw Error("generator spec: unknown kind '" + kind + "'");

  if (spec.kind == GeneratorKind::Named) {
    if (rest.empty()) throw Error("generator spec: named requires a fixture name");
    spec.name = rest;
    return spec;
  }
  std::stringstream ss(rest);
  std::string item;
  bool have_n = false;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw Error("generator spec: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      if (key == "n") {
        spec.n = std::stoi(value);
        have_n = true;
      } else if (key == "r") {
        spec.r = std::stoi(value);
      } else if (key == "seed") {
        spec.seed = std::stoull(value);
      } else if (key == "density") {
        spec.density = std::stod(value);
      } else {
        throw Error("generator spec: unknown key '" + key + "'");
      }
    } catch (const std::logic_error&) {
      throw Error("generator spec: bad value for '" + key + "': '" + value + "'");
    }
  }
  if (!have_n) throw Error("generator spec: missing n");
  return spec;
}

Framework generate(const GeneratorSpec& spec) {
  if (spec.kind == GeneratorKind::Named) return named_example(spec.name);
  Configuration config = random_general_position(spec.n, spec.r, spec.seed);
  switch (spec.kind) {
    case GeneratorKind::Complete: return Framework(complete_graph(spec.n), std::move(config));
    case GeneratorKind::Cycle: return Framework(cycle_graph(spec.n), std::move(config));
    case GeneratorKind::Lateration: return Framework(lateration_graph(spec.n, spec.r), std::move(config));
    case GeneratorKind::RandomGp:
      return Framework(random_connected_graph(spec.n, spec.density, spec.seed), std::move(config));
    case GeneratorKind::Named: break;
  }
  throw Error("generate: unreachable");
}

}  // namespace urigid
