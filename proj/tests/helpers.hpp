#pragma once

#include <random>
#include <utility>
#include <vector>

#include "nbwalk/graph.hpp"
#include "nbwalk/types.hpp"

namespace nbw::testing {

inline Graph triangle() { return make_cycle(3); }

inline Graph k4() { return make_complete(4); }

inline Graph path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return Graph::from_undirected_edges(n, std::move(edges), false);
}

inline Graph star_graph(int leaves) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= leaves; ++i) edges.emplace_back(0, i);
  return Graph::from_undirected_edges(leaves + 1, std::move(edges), false);
}

// Uniform random attachment tree.
inline Graph random_tree(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    edges.emplace_back(pick(rng), v);
  }
  return Graph::from_undirected_edges(n, std::move(edges), false);
}

// Outer 5-cycle, inner pentagram, spokes.
inline Graph petersen() {
  std::vector<std::pair<int, int>> edges = {
      {0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0},
      {0, 5}, {1, 6}, {2, 7}, {3, 8}, {4, 9},
      {5, 7}, {7, 9}, {9, 6}, {6, 8}, {8, 5}};
  return Graph::from_undirected_edges(10, std::move(edges));
}

// Retries seeds until the generated graph is connected (and optionally
// non-bipartite), so property runs always act on theorem-shaped inputs.
template <typename Gen>
Graph connected_sample(Gen&& gen, std::uint64_t seed, bool need_non_bipartite) {
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    Graph g = gen(seed + 1000003 * attempt);
    if (!g.is_connected()) continue;
    if (need_non_bipartite && g.is_bipartite()) continue;
    return g;
  }
  throw std::runtime_error("no admissible sample after 64 attempts");
}

inline Weights random_weights(const Graph& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> p_dist(0.5, 2.0);
  std::uniform_real_distribution<double> w_dist(-1.0, 1.0);
  Weights w;
  w.p.resize(static_cast<size_t>(g.edge_count()));
  for (double& value : w.p) value = p_dist(rng);
  w.W.resize(static_cast<size_t>(g.vertex_count()));
  for (double& value : w.W) value = w_dist(rng);
  return w;
}

inline CVector random_complex_vector(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  CVector f(n);
  for (int i = 0; i < n; ++i) f(i) = Complex(gauss(rng), gauss(rng));
  return f;
}

} // namespace nbw::testing
