#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "urigid/framework.hpp"

namespace urigid {

Graph complete_graph(int n);
Graph cycle_graph(int n);

/// (r+1)-lateration graph: nodes 0..r form a clique and every later node k
/// is joined to the r+1 nodes immediately preceding it. Requires n >= r+2.
Graph lateration_graph(int n, int r);

/// n points drawn uniformly from [0,1]^r, redrawn until they are in general
/// position (at most 1000 attempts). Deterministic in `seed`.
Configuration random_general_position(int n, int r, std::uint64_t seed, const Tolerances& tol = {});

struct NamedFramework {
  std::string name;
  Framework framework;
};

/// Curated fixtures: square-k4, square-c4, k3-line, collinear-bad-gp,
/// lateration-5-2.
std::vector<NamedFramework> named_examples();

/// Looks up a fixture by name. Throws Error if unknown.
Framework named_example(const std::string& name);

enum class GeneratorKind { Complete, Cycle, Lateration, RandomGp, Named };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Named;
  int n = 0;
  int r = 2;
  std::uint64_t seed = 0;
  double density = 0.6;  // for RandomGp
  std::string name;      // for Named
};

/// Connected random graph: a random spanning tree plus every other pair with
/// probability `density`.
Graph random_connected_graph(int n, double density, std::uint64_t seed);

/// Parses "kind[:key=value,...]", e.g. "lateration:n=8,r=2,seed=3",
/// "random-gp:n=7,r=2,seed=1,density=0.5" or "named:square-k4".
GeneratorSpec parse_generator_spec(const std::string& text);

/// Materializes a spec. Graph kinds place their nodes at
/// random_general_position(n, r, seed).
Framework generate(const GeneratorSpec& spec);

}  // namespace urigid
