#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace nbw {

// Simple undirected graph with an indexed directed-edge table.
//
// Directed edges come in reversal pairs: index 2k is undirected edge k
// oriented (min id -> max id), index 2k+1 its reverse, so reverse(e) == e^1
// and the reversal involution is free of fixed points by construction.
// Vertex ids are compacted to 0..|V|-1 in order of first appearance.
//
// Immutable after construction; safe to share across threads.
class Graph {
public:
  // Parses "u v" lines; '#' starts a comment, blank lines are skipped.
  // Rejects self-loops, repeated unordered pairs, non-integer tokens,
  // empty input and vertices of degree < 2.
  static Graph from_edge_list_text(std::string_view text);

  // Direct constructor from unordered pairs on vertices 0..vertex_count-1.
  // Cover trees and oracle trees need leaves, so the degree >= 2 check
  // can be switched off.
  static Graph from_undirected_edges(int vertex_count,
                                     std::vector<std::pair<int, int>> edges,
                                     bool require_min_degree_two = true);

  int vertex_count() const { return static_cast<int>(degree_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int directed_count() const { return 2 * edge_count(); }
  // |E| - |V| + 1, the rank of the fundamental group (connected case).
  int rank() const { return edge_count() - vertex_count() + 1; }

  const std::vector<std::pair<int, int>>& undirected_edges() const {
    return edges_;
  }

  int origin(int e) const { return origin_[static_cast<size_t>(e)]; }
  int terminus(int e) const { return origin_[static_cast<size_t>(e ^ 1)]; }
  static int reverse(int e) { return e ^ 1; }
  static int undirected_index(int e) { return e >> 1; }

  int degree(int v) const { return degree_[static_cast<size_t>(v)]; }
  // Q(v) = D(v) - 1
  int branching(int v) const { return degree_[static_cast<size_t>(v)] - 1; }
  int max_degree() const;
  int min_degree() const;

  // Directed edges with origin v, and the neighbour list in matching order.
  const std::vector<int>& out_edges(int v) const {
    return out_edges_[static_cast<size_t>(v)];
  }
  std::vector<int> neighbors(int v) const;

  // Directed edge id for (u, v), or -1 when u and v are not adjacent.
  int directed_edge(int u, int v) const;

  bool is_connected() const;
  bool is_bipartite() const;

  // One "u v" line per undirected edge; from_edge_list_text round-trips it.
  std::string to_edge_list_text() const;

private:
  Graph() = default;

  std::vector<std::pair<int, int>> edges_;
  std::vector<int> origin_;  // size 2|E|, terminus of e is origin_[e^1]
  std::vector<int> degree_;
  std::vector<std::vector<int>> out_edges_;
  std::unordered_map<std::uint64_t, int> edge_ids_;
};

struct ValidationReport {
  bool is_simple = true;  // guaranteed by construction
  bool is_connected = false;
  bool is_bipartite = false;
  int min_degree = 0;
  // connected, non-bipartite, min degree >= 3
  bool meets_gap_hypotheses = false;
};

ValidationReport validate(const Graph& g);

// Symmetric edge weights p (nonzero exactly on E) and vertex potential W.
// p is stored per undirected edge, which makes p(x,y) = p(y,x) automatic.
struct Weights {
  std::vector<double> p;  // indexed by undirected edge
  std::vector<double> W;  // indexed by vertex

  double p_of_directed(int e) const { return p[static_cast<size_t>(e >> 1)]; }
};

// Builds Weights from [u, v, value] triples (either orientation, no
// conflicting duplicates) and a potential of length |V|. The triples must
// cover exactly the edge set.
Weights weights_from_triples(
    const Graph& g, const std::vector<std::tuple<int, int, double>>& triples,
    const std::vector<double>& potential);

// JSON document {"p": [[u,v,value],...], "W": [w0,...]}.
Weights weights_from_json_text(const Graph& g, std::string_view text);

// Deterministic test-family generators.
Graph make_cycle(int n);
Graph make_complete(int n);
Graph random_regular(int n, int d, std::uint64_t seed);
Graph random_min_degree(int n, int dmin, int dmax, std::uint64_t seed);

// Family spec strings: "cycle:n", "complete:n", "random_regular:n:d",
// "random_min_degree:n:dmin:dmax". Spaces also accepted as separators.
Graph generate_from_spec(std::string_view spec, std::uint64_t seed);

} // namespace nbw
