#include "nbwalk/graph.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "nbwalk/errors.hpp"

namespace nbw {

namespace {

std::uint64_t pair_key(int u, int v) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
         static_cast<std::uint32_t>(v);
}

} // namespace

Graph Graph::from_undirected_edges(int vertex_count,
                                   std::vector<std::pair<int, int>> edges,
                                   bool require_min_degree_two) {
  Graph g;
  g.degree_.assign(static_cast<size_t>(vertex_count), 0);
  g.edges_.reserve(edges.size());
  g.origin_.reserve(2 * edges.size());
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
      throw Error(ErrorKind::Malformed, "vertex id out of range");
    if (u == v)
      throw Error(ErrorKind::SelfLoop,
                  "self-loop at vertex " + std::to_string(u));
    if (u > v) std::swap(u, v);
    if (!g.edge_ids_.emplace(pair_key(u, v), g.directed_count()).second)
      throw Error(ErrorKind::MultiEdge, "repeated edge " + std::to_string(u) +
                                            " " + std::to_string(v));
    g.edge_ids_.emplace(pair_key(v, u), g.directed_count() + 1);
    g.origin_.push_back(u);
    g.origin_.push_back(v);
    g.edges_.emplace_back(u, v);
    ++g.degree_[static_cast<size_t>(u)];
    ++g.degree_[static_cast<size_t>(v)];
  }
  if (vertex_count <= 0 || (require_min_degree_two && g.edges_.empty()))
    throw Error(ErrorKind::Empty, "no edges");
  if (require_min_degree_two) {
    for (int v = 0; v < vertex_count; ++v)
      if (g.degree_[static_cast<size_t>(v)] < 2)
        throw Error(ErrorKind::MinDegree,
                    "vertex " + std::to_string(v) + " has degree " +
                        std::to_string(g.degree_[static_cast<size_t>(v)]) +
                        " < 2");
  }
  g.out_edges_.resize(static_cast<size_t>(vertex_count));
  for (int v = 0; v < vertex_count; ++v)
    g.out_edges_[static_cast<size_t>(v)].reserve(
        static_cast<size_t>(g.degree_[static_cast<size_t>(v)]));
  for (int e = 0; e < g.directed_count(); ++e)
    g.out_edges_[static_cast<size_t>(g.origin(e))].push_back(e);
  return g;
}

Graph Graph::from_edge_list_text(std::string_view text) {
  std::vector<std::pair<int, int>> raw;
  std::unordered_map<long long, int> compact;
  std::vector<std::pair<int, int>> edges;

  size_t pos = 0;
  int line_no = 0;
  while (pos < text.size()) {
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (size_t hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    std::vector<long long> ids;
    size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\t' ||
                                 line[i] == '\r'))
        ++i;
      if (i >= line.size()) break;
      size_t j = i;
      while (j < line.size() && line[j] != ' ' && line[j] != '\t' &&
             line[j] != '\r')
        ++j;
      long long value = 0;
      auto [ptr, ec] =
          std::from_chars(line.data() + i, line.data() + j, value);
      if (ec != std::errc() || ptr != line.data() + j || value < 0)
        throw Error(ErrorKind::Malformed,
                    "line " + std::to_string(line_no) + ": bad token '" +
                        std::string(line.substr(i, j - i)) + "'");
      ids.push_back(value);
      i = j;
    }
    if (ids.empty()) continue;
    if (ids.size() != 2)
      throw Error(ErrorKind::Malformed, "line " + std::to_string(line_no) +
                                            ": expected two vertex ids");
    if (ids[0] == ids[1])
      throw Error(ErrorKind::SelfLoop, "line " + std::to_string(line_no) +
                                           ": self-loop " +
                                           std::to_string(ids[0]));
    int cu, cv;
    auto assign = [&](long long id) {
      auto it = compact.find(id);
      if (it != compact.end()) return it->second;
      int next = static_cast<int>(compact.size());
      compact.emplace(id, next);
      return next;
    };
    cu = assign(ids[0]);
    cv = assign(ids[1]);
    edges.emplace_back(std::min(cu, cv), std::max(cu, cv));
  }
  if (edges.empty()) throw Error(ErrorKind::Empty, "no edges");
  return from_undirected_edges(static_cast<int>(compact.size()),
                               std::move(edges));
}

int Graph::max_degree() const {
  return *std::max_element(degree_.begin(), degree_.end());
}

int Graph::min_degree() const {
  return *std::min_element(degree_.begin(), degree_.end());
}

std::vector<int> Graph::neighbors(int v) const {
  std::vector<int> out;
  out.reserve(out_edges_[static_cast<size_t>(v)].size());
  for (int e : out_edges_[static_cast<size_t>(v)]) out.push_back(terminus(e));
  return out;
}

int Graph::directed_edge(int u, int v) const {
  auto it = edge_ids_.find(pair_key(u, v));
  return it == edge_ids_.end() ? -1 : it->second;
}

bool Graph::is_connected() const {
  const int n = vertex_count();
  if (n == 0) return true;
  std::vector<char> seen(static_cast<size_t>(n), 0);
  std::vector<int> stack = {0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int e : out_edges_[static_cast<size_t>(x)]) {
      int y = terminus(e);
      if (!seen[static_cast<size_t>(y)]) {
        seen[static_cast<size_t>(y)] = 1;
        ++count;
        stack.push_back(y);
      }
    }
  }
  return count == n;
}

bool Graph::is_bipartite() const {
  const int n = vertex_count();
  std::vector<int> color(static_cast<size_t>(n), -1);
  for (int start = 0; start < n; ++start) {
    if (color[static_cast<size_t>(start)] != -1) continue;
    color[static_cast<size_t>(start)] = 0;
    std::vector<int> stack = {start};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (int e : out_edges_[static_cast<size_t>(x)]) {
        int y = terminus(e);
        if (color[static_cast<size_t>(y)] == -1) {
          color[static_cast<size_t>(y)] = 1 - color[static_cast<size_t>(x)];
          stack.push_back(y);
        } else if (color[static_cast<size_t>(y)] ==
                   color[static_cast<size_t>(x)]) {
          return false;
        }
      }
    }
  }
  return true;
}

std::string Graph::to_edge_list_text() const {
  std::ostringstream out;
  for (const auto& [u, v] : edges_) out << u << ' ' << v << '\n';
  return out.str();
}

ValidationReport validate(const Graph& g) {
  ValidationReport r;
  r.is_simple = true;
  r.is_connected = g.is_connected();
  r.is_bipartite = g.is_bipartite();
  r.min_degree = g.min_degree();
  r.meets_gap_hypotheses =
      r.is_connected && !r.is_bipartite && r.min_degree >= 3;
  return r;
}

Weights weights_from_triples(
    const Graph& g, const std::vector<std::tuple<int, int, double>>& triples,
    const std::vector<double>& potential) {
  if (static_cast<int>(potential.size()) != g.vertex_count())
    throw Error(ErrorKind::WeightMismatch,
                "potential length " + std::to_string(potential.size()) +
                    " != vertex count " + std::to_string(g.vertex_count()));
  Weights w;
  w.W = potential;
  w.p.assign(static_cast<size_t>(g.edge_count()), 0.0);
  std::vector<char> set_flag(static_cast<size_t>(g.edge_count()), 0);
  for (const auto& [u, v, value] : triples) {
    int e = (u >= 0 && v >= 0 && u < g.vertex_count() && v < g.vertex_count())
                ? g.directed_edge(u, v)
                : -1;
    if (e < 0)
      throw Error(ErrorKind::WeightMismatch,
                  "weight on non-edge (" + std::to_string(u) + ", " +
                      std::to_string(v) + ")");
    if (value == 0.0)
      throw Error(ErrorKind::WeightMismatch,
                  "zero weight on edge (" + std::to_string(u) + ", " +
                      std::to_string(v) + ")");
    size_t k = static_cast<size_t>(Graph::undirected_index(e));
    if (set_flag[k] && w.p[k] != value)
      throw Error(ErrorKind::WeightMismatch,
                  "conflicting weights on edge (" + std::to_string(u) + ", " +
                      std::to_string(v) + ")");
    set_flag[k] = 1;
    w.p[k] = value;
  }
  for (int k = 0; k < g.edge_count(); ++k)
    if (!set_flag[static_cast<size_t>(k)])
      throw Error(ErrorKind::WeightMismatch,
                  "edge (" + std::to_string(g.undirected_edges()[k].first) +
                      ", " + std::to_string(g.undirected_edges()[k].second) +
                      ") has no weight");
  return w;
}

Weights weights_from_json_text(const Graph& g, std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::WeightMismatch,
                std::string("bad weights document: ") + e.what());
  }
  if (!doc.contains("p") || !doc.contains("W"))
    throw Error(ErrorKind::WeightMismatch,
                "weights document needs entries \"p\" and \"W\"");
  std::vector<std::tuple<int, int, double>> triples;
  for (const auto& item : doc["p"]) {
    if (!item.is_array() || item.size() != 3)
      throw Error(ErrorKind::WeightMismatch,
                  "each \"p\" entry must be [u, v, value]");
    triples.emplace_back(item[0].get<int>(), item[1].get<int>(),
                         item[2].get<double>());
  }
  std::vector<double> potential = doc["W"].get<std::vector<double>>();
  return weights_from_triples(g, triples, potential);
}

Graph make_cycle(int n) {
  if (n < 3)
    throw Error(ErrorKind::Infeasible,
                "cycle needs n >= 3, got " + std::to_string(n));
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return Graph::from_undirected_edges(n, std::move(edges));
}

Graph make_complete(int n) {
  if (n < 3)
    throw Error(ErrorKind::Infeasible,
                "complete graph needs n >= 3, got " + std::to_string(n));
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return Graph::from_undirected_edges(n, std::move(edges));
}

namespace {

// Pairs up stubs and reports the resulting edge set, or failure when a
// self-loop or duplicate shows up.
bool try_pairing(const std::vector<int>& stubs_in, std::mt19937_64& rng,
                 std::vector<std::pair<int, int>>& edges) {
  std::vector<int> stubs = stubs_in;
  std::shuffle(stubs.begin(), stubs.end(), rng);
  std::set<std::pair<int, int>> seen;
  edges.clear();
  for (size_t i = 0; i + 1 < stubs.size(); i += 2) {
    int u = stubs[i], v = stubs[i + 1];
    if (u == v) return false;
    auto key = std::minmax(u, v);
    if (!seen.insert(key).second) return false;
    edges.emplace_back(key.first, key.second);
  }
  return true;
}

// Pairing with local rewiring: invalid pairs are swapped against random
// valid ones until the matching is simple.
bool try_pairing_with_repair(const std::vector<int>& stubs_in,
                             std::mt19937_64& rng,
                             std::vector<std::pair<int, int>>& edges) {
  std::vector<int> stubs = stubs_in;
  std::shuffle(stubs.begin(), stubs.end(), rng);
  size_t npairs = stubs.size() / 2;
  auto pair_at = [&](size_t i) {
    return std::pair<int, int>(stubs[2 * i], stubs[2 * i + 1]);
  };
  auto valid = [](std::pair<int, int> p) { return p.first != p.second; };

  std::map<std::pair<int, int>, int> count;
  auto norm = [](std::pair<int, int> p) {
    return std::pair<int, int>(std::min(p.first, p.second),
                               std::max(p.first, p.second));
  };
  for (size_t i = 0; i < npairs; ++i) ++count[norm(pair_at(i))];
  auto bad = [&](size_t i) {
    auto p = pair_at(i);
    return !valid(p) || count[norm(p)] > 1;
  };

  std::uniform_int_distribution<size_t> pick(0, npairs - 1);
  for (int step = 0; step < 200000; ++step) {
    size_t worst = npairs;
    for (size_t i = 0; i < npairs; ++i)
      if (bad(i)) {
        worst = i;
        break;
      }
    if (worst == npairs) {
      edges.clear();
      for (size_t i = 0; i < npairs; ++i) edges.push_back(norm(pair_at(i)));
      return true;
    }
    size_t j = pick(rng);
    if (j == worst) continue;
    auto a = pair_at(worst), b = pair_at(j);
    auto na1 = std::pair<int, int>(a.first, b.second);
    auto nb1 = std::pair<int, int>(b.first, a.second);
    if (!valid(na1) || !valid(nb1)) continue;
    --count[norm(a)];
    --count[norm(b)];
    if (count[norm(na1)] > 0 || count[norm(nb1)] > 0 ||
        norm(na1) == norm(nb1)) {
      ++count[norm(a)];
      ++count[norm(b)];
      continue;
    }
    std::swap(stubs[2 * worst + 1], stubs[2 * j + 1]);
    ++count[norm(pair_at(worst))];
    ++count[norm(pair_at(j))];
  }
  return false;
}

} // namespace

Graph random_regular(int n, int d, std::uint64_t seed) {
  if (d < 2 || n <= d || (static_cast<long long>(n) * d) % 2 != 0)
    throw Error(ErrorKind::Infeasible,
                "random_regular needs 2 <= d < n and n*d even (n=" +
                    std::to_string(n) + ", d=" + std::to_string(d) + ")");
  std::mt19937_64 rng(seed);
  std::vector<int> stubs;
  stubs.reserve(static_cast<size_t>(n) * d);
  for (int v = 0; v < n; ++v)
    for (int k = 0; k < d; ++k) stubs.push_back(v);
  std::vector<std::pair<int, int>> edges;
  for (int attempt = 0; attempt < 50000; ++attempt) {
    if (try_pairing(stubs, rng, edges))
      return Graph::from_undirected_edges(n, std::move(edges));
  }
  throw Error(ErrorKind::GenerationFailure,
              "pairing rejection budget exhausted for random_regular(" +
                  std::to_string(n) + ", " + std::to_string(d) + ")");
}

Graph random_min_degree(int n, int dmin, int dmax, std::uint64_t seed) {
  if (dmin < 2 || dmax < dmin || dmax >= n)
    throw Error(ErrorKind::Infeasible,
                "random_min_degree needs 2 <= dmin <= dmax < n");
  if (dmin == dmax && (static_cast<long long>(n) * dmin) % 2 != 0)
    throw Error(ErrorKind::Infeasible,
                "constant degree window with odd n*d has no graph");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> deg_pick(dmin, dmax);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<int> deg(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) deg[static_cast<size_t>(v)] = deg_pick(rng);
    int total = std::accumulate(deg.begin(), deg.end(), 0);
    if (total % 2 != 0) {
      std::uniform_int_distribution<int> vpick(0, n - 1);
      int v = vpick(rng);
      if (deg[static_cast<size_t>(v)] < dmax)
        ++deg[static_cast<size_t>(v)];
      else
        --deg[static_cast<size_t>(v)];
      if (deg[static_cast<size_t>(v)] < dmin) continue;
    }
    std::vector<int> stubs;
    for (int v = 0; v < n; ++v)
      for (int k = 0; k < deg[static_cast<size_t>(v)]; ++k) stubs.push_back(v);
    std::vector<std::pair<int, int>> edges;
    if (try_pairing_with_repair(stubs, rng, edges))
      return Graph::from_undirected_edges(n, std::move(edges));
  }
  throw Error(ErrorKind::GenerationFailure,
              "repair budget exhausted for random_min_degree(" +
                  std::to_string(n) + ", " + std::to_string(dmin) + ", " +
                  std::to_string(dmax) + ")");
}

Graph generate_from_spec(std::string_view spec, std::uint64_t seed) {
  std::string s(spec);
  for (char& c : s)
    if (c == ':' || c == ',') c = ' ';
  std::istringstream in(s);
  std::string family;
  in >> family;
  auto next_int = [&](const char* what) {
    long long v;
    if (!(in >> v))
      throw Error(ErrorKind::Malformed,
                  std::string("generator spec missing ") + what);
    return static_cast<int>(v);
  };
  if (family == "cycle") return make_cycle(next_int("n"));
  if (family == "complete") return make_complete(next_int("n"));
  if (family == "random_regular") {
    int n = next_int("n");
    int d = next_int("d");
    return random_regular(n, d, seed);
  }
  if (family == "random_min_degree") {
    int n = next_int("n");
    int dmin = next_int("dmin");
    int dmax = next_int("dmax");
    return random_min_degree(n, dmin, dmax, seed);
  }
  throw Error(ErrorKind::Malformed, "unknown generator family '" + family +
                                        "'");
}

} // namespace nbw
