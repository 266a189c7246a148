#include "nbwalk/green.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Sparse>

#include "nbwalk/errors.hpp"
#include "nbwalk/operators.hpp"

namespace nbw {

namespace {

void require_upper_half_plane(Complex z) {
  if (!(z.imag() > 0.0))
    throw Error(ErrorKind::NotInUpperHalfPlane,
                "spectral parameter must satisfy Im z > 0");
}

void require_tree(const Graph& g) {
  if (g.edge_count() != g.vertex_count() - 1 || !g.is_connected())
    throw Error(ErrorKind::NotATree, "input graph is not a tree");
}

std::vector<double> directed_weights(const Graph& g, const Weights* w) {
  std::vector<double> pe(static_cast<size_t>(g.directed_count()), 1.0);
  if (w) {
    if (static_cast<int>(w->p.size()) != g.edge_count() ||
        static_cast<int>(w->W.size()) != g.vertex_count())
      throw Error(ErrorKind::WeightMismatch, "weights do not match the graph");
    for (int e = 0; e < g.directed_count(); ++e)
      pe[static_cast<size_t>(e)] = w->p_of_directed(e);
  }
  return pe;
}

std::vector<double> potential_of(const Graph& g, const Weights* w) {
  if (w) return w->W;
  return std::vector<double>(static_cast<size_t>(g.vertex_count()), 0.0);
}

} // namespace

ZetaField solve_zeta(const Graph& g, const Weights* w, Complex z, double tol,
                     int max_iter) {
  require_upper_half_plane(z);
  if (tol <= 0.0) throw Error(ErrorKind::Infeasible, "tolerance must be > 0");
  const int nb = g.directed_count();
  const int n = g.vertex_count();
  const std::vector<double> pe = directed_weights(g, w);
  const std::vector<double> pot = potential_of(g, w);

  CVector zeta = CVector::Constant(nb, 1.0 / z);
  CVector next(nb);
  CVector totals(n);
  double update = 0.0;
  int iterations = 0;
  bool converged = false;
  while (iterations < max_iter) {
    totals.setZero();
    for (int e = 0; e < nb; ++e)
      totals(g.origin(e)) += pe[static_cast<size_t>(e)] *
                             pe[static_cast<size_t>(e)] * zeta(e);
    for (int e = 0; e < nb; ++e) {
      const int v = g.terminus(e);
      const int er = Graph::reverse(e);
      const double prev2 =
          pe[static_cast<size_t>(er)] * pe[static_cast<size_t>(er)];
      next(e) = 1.0 / (z - pot[static_cast<size_t>(v)] -
                       (totals(v) - prev2 * zeta(er)));
    }
    update = (next - zeta).cwiseAbs().maxCoeff();
    zeta.swap(next);
    ++iterations;
    if (!std::isfinite(update)) break;
    if (update < tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw Error(ErrorKind::NonConvergence,
                "zeta iteration did not converge after " +
                    std::to_string(iterations) +
                    " sweeps (last update " + std::to_string(update) + ")");

  ZetaField field;
  field.z = z;
  field.zeta = zeta;
  if (w) field.weights = *w;
  field.iterations = iterations;
  field.final_update = update;

  totals.setZero();
  for (int e = 0; e < nb; ++e)
    totals(g.origin(e)) +=
        pe[static_cast<size_t>(e)] * pe[static_cast<size_t>(e)] * zeta(e);
  field.m.resize(n);
  field.vertex_green.resize(n);
  for (int v = 0; v < n; ++v) {
    Complex two_m = z - pot[static_cast<size_t>(v)] - totals(v);
    field.m(v) = two_m / 2.0;
    field.vertex_green(v) = -1.0 / two_m;
    if (!(field.vertex_green(v).imag() > 0.0))
      throw Error(ErrorKind::Inconsistent,
                  "vertex Green function lost the Herglotz sign");
  }
  for (int e = 0; e < nb; ++e)
    if (!(zeta(e).imag() < 0.0))
      throw Error(ErrorKind::Inconsistent,
                  "zeta lost the Herglotz sign at an edge");

  field.edge_green.resize(g.edge_count());
  for (int k = 0; k < g.edge_count(); ++k) {
    const int e = 2 * k;
    const int er = 2 * k + 1;
    Complex forward =
        pe[static_cast<size_t>(e)] * zeta(e) * field.vertex_green(g.origin(e));
    Complex backward = pe[static_cast<size_t>(er)] * zeta(er) *
                       field.vertex_green(g.origin(er));
    double scale = std::max({1.0, std::abs(forward), std::abs(backward)});
    if (std::abs(forward - backward) > 1e-8 * scale)
      throw Error(ErrorKind::Inconsistent,
                  "edge Green function is not reversal invariant");
    field.edge_green(k) = forward;
  }
  field.residual = resolvent_residuals(g, field);
  return field;
}

double resolvent_residuals(const Graph& g, const ZetaField& field) {
  const int nb = g.directed_count();
  const int n = g.vertex_count();
  const Weights* w = field.weights ? &*field.weights : nullptr;
  const std::vector<double> pe = directed_weights(g, w);
  const std::vector<double> pot = potential_of(g, w);
  const Complex z = field.z;

  CVector totals = CVector::Zero(n);
  for (int e = 0; e < nb; ++e)
    totals(g.origin(e)) +=
        pe[static_cast<size_t>(e)] * pe[static_cast<size_t>(e)] * field.zeta(e);

  double res = 0.0;
  // vertex equation
  for (int v = 0; v < n; ++v)
    res = std::max(res, std::abs(z - pot[static_cast<size_t>(v)] - totals(v) -
                                 2.0 * field.m(v)));
  for (int e = 0; e < nb; ++e) {
    const int v = g.terminus(e);
    const int w_vertex = g.origin(e);
    const int er = Graph::reverse(e);
    const double prev2 =
        pe[static_cast<size_t>(er)] * pe[static_cast<size_t>(er)];
    // edge equation
    res = std::max(res,
                   std::abs(z - pot[static_cast<size_t>(v)] -
                            (totals(v) - prev2 * field.zeta(er)) -
                            1.0 / field.zeta(e)));
    // reversal identities
    res = std::max(res, std::abs(field.zeta(e) * field.m(v) -
                                 field.m(w_vertex) * field.zeta(er)));
    res = std::max(res, std::abs(1.0 / field.zeta(e) -
                                 prev2 * field.zeta(er) - 2.0 * field.m(v)));
  }
  return res;
}

double regular_closed_form_residual(const Graph& g, const ZetaField& field) {
  const int d = g.max_degree();
  if (d != g.min_degree())
    throw Error(ErrorKind::NotRegular, "graph is not regular");
  Complex zeta = field.zeta.mean();
  double res = (field.zeta.array() - zeta).abs().maxCoeff();
  Complex denom = zeta * zeta - 1.0;
  res = std::max(res,
                 (field.vertex_green.array() - zeta / denom).abs().maxCoeff());
  res = std::max(
      res, (field.edge_green.array() - zeta * zeta / denom).abs().maxCoeff());
  return res;
}

CoverTree truncated_cover(const Graph& g, int root, int depth) {
  if (root < 0 || root >= g.vertex_count())
    throw Error(ErrorKind::Infeasible, "cover root out of range");
  if (depth < 1) throw Error(ErrorKind::Infeasible, "cover depth must be >= 1");

  constexpr long long kMaxVertices = 4000000;
  std::vector<int> base_vertex = {root};
  std::vector<int> parent_base = {-1};
  std::vector<std::pair<int, int>> edges;

  int begin = 0, end = 1;
  for (int level = 0; level < depth; ++level) {
    for (int node = begin; node < end; ++node) {
      const int base = base_vertex[static_cast<size_t>(node)];
      for (int e : g.out_edges(base)) {
        const int nb_vertex = g.terminus(e);
        if (nb_vertex == parent_base[static_cast<size_t>(node)]) continue;
        int child = static_cast<int>(base_vertex.size());
        if (child > kMaxVertices)
          throw Error(ErrorKind::Infeasible,
                      "truncated cover exceeds the size limit");
        base_vertex.push_back(nb_vertex);
        parent_base.push_back(base);
        edges.emplace_back(node, child);
      }
    }
    begin = end;
    end = static_cast<int>(base_vertex.size());
  }

  const int total = static_cast<int>(base_vertex.size());
  std::vector<bool> truncated(static_cast<size_t>(total), false);
  for (int node = begin; node < end; ++node) {
    const int base = base_vertex[static_cast<size_t>(node)];
    const int children =
        g.degree(base) - (parent_base[static_cast<size_t>(node)] >= 0 ? 1 : 0);
    truncated[static_cast<size_t>(node)] = children > 0;
  }
  return CoverTree{Graph::from_undirected_edges(
                       total, std::move(edges),
                       /*require_min_degree_two=*/false),
                   0, std::move(base_vertex), std::move(truncated)};
}

namespace {

// Vertices of the component of v in tree minus the edge {v, w}.
std::vector<int> branch_component(const Graph& tree, int v, int w) {
  std::vector<int> comp = {v};
  std::vector<char> seen(static_cast<size_t>(tree.vertex_count()), 0);
  seen[static_cast<size_t>(v)] = 1;
  seen[static_cast<size_t>(w)] = 1;
  std::vector<int> stack = {v};
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    for (int e : tree.out_edges(x)) {
      int y = tree.terminus(e);
      if (!seen[static_cast<size_t>(y)]) {
        seen[static_cast<size_t>(y)] = 1;
        comp.push_back(y);
        stack.push_back(y);
      }
    }
  }
  return comp;
}

} // namespace

TreeGreenTables tree_green_oracle(const Graph& tree, const Weights* w,
                                  Complex z) {
  require_tree(tree);
  require_upper_half_plane(z);
  const int n = tree.vertex_count();
  const std::vector<double> pe = directed_weights(tree, w);
  const std::vector<double> pot = potential_of(tree, w);

  CMatrix h = CMatrix::Zero(n, n);
  for (int e = 0; e < tree.directed_count(); ++e)
    h(tree.origin(e), tree.terminus(e)) = pe[static_cast<size_t>(e)];
  for (int v = 0; v < n; ++v) h(v, v) = pot[static_cast<size_t>(v)];

  TreeGreenTables tables;
  tables.green = (h - z * CMatrix::Identity(n, n)).partialPivLu().inverse();
  tables.m.resize(n);
  for (int v = 0; v < n; ++v) tables.m(v) = -0.5 / tables.green(v, v);

  tables.zeta.resize(tree.directed_count());
  for (int e = 0; e < tree.directed_count(); ++e) {
    const int branch_w = tree.origin(e);
    const int v = tree.terminus(e);
    std::vector<int> comp = branch_component(tree, v, branch_w);
    std::vector<int> index(static_cast<size_t>(n), -1);
    for (size_t i = 0; i < comp.size(); ++i)
      index[static_cast<size_t>(comp[i])] = static_cast<int>(i);
    CMatrix hs = CMatrix::Zero(static_cast<int>(comp.size()),
                               static_cast<int>(comp.size()));
    for (size_t i = 0; i < comp.size(); ++i) {
      const int x = comp[i];
      hs(static_cast<int>(i), static_cast<int>(i)) =
          pot[static_cast<size_t>(x)] - z;
      for (int eo : tree.out_edges(x)) {
        const int y = tree.terminus(eo);
        if (index[static_cast<size_t>(y)] >= 0)
          hs(static_cast<int>(i), index[static_cast<size_t>(y)]) =
              pe[static_cast<size_t>(eo)];
      }
    }
    CVector rhs = CVector::Zero(static_cast<int>(comp.size()));
    rhs(index[static_cast<size_t>(v)]) = 1.0;
    CVector col = hs.partialPivLu().solve(rhs);
    tables.zeta(e) = -col(index[static_cast<size_t>(v)]);
  }
  return tables;
}

Complex tree_zeta_at(const Graph& tree, const Weights* w, Complex z, int e) {
  require_tree(tree);
  require_upper_half_plane(z);
  if (e < 0 || e >= tree.directed_count())
    throw Error(ErrorKind::Infeasible, "edge index out of range");
  const std::vector<double> pe = directed_weights(tree, w);
  const std::vector<double> pot = potential_of(tree, w);

  const int branch_w = tree.origin(e);
  const int v = tree.terminus(e);
  std::vector<int> comp = branch_component(tree, v, branch_w);
  std::vector<int> index(static_cast<size_t>(tree.vertex_count()), -1);
  for (size_t i = 0; i < comp.size(); ++i)
    index[static_cast<size_t>(comp[i])] = static_cast<int>(i);

  using Triplet = Eigen::Triplet<Complex>;
  std::vector<Triplet> entries;
  entries.reserve(3 * comp.size());
  for (size_t i = 0; i < comp.size(); ++i) {
    const int x = comp[i];
    entries.emplace_back(static_cast<int>(i), static_cast<int>(i),
                         Complex(pot[static_cast<size_t>(x)], 0.0) - z);
    for (int eo : tree.out_edges(x)) {
      const int y = tree.terminus(eo);
      if (index[static_cast<size_t>(y)] >= 0)
        entries.emplace_back(static_cast<int>(i),
                             index[static_cast<size_t>(y)],
                             Complex(pe[static_cast<size_t>(eo)], 0.0));
    }
  }
  Eigen::SparseMatrix<Complex> hs(static_cast<int>(comp.size()),
                                  static_cast<int>(comp.size()));
  hs.setFromTriplets(entries.begin(), entries.end());
  Eigen::SparseLU<Eigen::SparseMatrix<Complex>> lu(hs);
  if (lu.info() != Eigen::Success)
    throw Error(ErrorKind::SingularMatrix,
                "sparse factorization of the branch failed");
  CVector rhs = CVector::Zero(static_cast<int>(comp.size()));
  rhs(index[static_cast<size_t>(v)]) = 1.0;
  CVector col = lu.solve(rhs);
  return -col(index[static_cast<size_t>(v)]);
}

SeriesCheck resolvent_series_check(const Graph& tree, Complex z, int e,
                                   int e_prime) {
  require_tree(tree);
  require_upper_half_plane(z);
  const int nb = tree.directed_count();
  if (e < 0 || e >= nb || e_prime < 0 || e_prime >= nb)
    throw Error(ErrorKind::Infeasible, "edge index out of range");

  ZetaField field = solve_zeta(tree, nullptr, z, 1e-14, 100000);
  CMatrix op = (CVector(field.zeta.cwiseInverse())).asDiagonal();
  op -= hashimoto_matrix(tree).cast<Complex>();
  Eigen::FullPivLU<CMatrix> lu(op);
  if (!lu.isInvertible())
    throw Error(ErrorKind::SingularMatrix,
                "non-backtracking resolvent is singular");
  CMatrix minv = lu.inverse();

  const int n = tree.vertex_count();
  CMatrix a = adjacency_matrix(tree).cast<Complex>();
  CMatrix ginv = (a - z * CMatrix::Identity(n, n)).partialPivLu().inverse();

  const int x = tree.origin(e_prime);
  const int y = tree.terminus(e);
  SeriesCheck check;
  check.lhs = minv(e, e_prime) + (x == y ? 1.0 : 0.0);
  check.rhs = -2.0 * field.m(x) * ginv(x, y);
  check.rel_error = std::abs(check.lhs - check.rhs) /
                    std::max({std::abs(check.lhs), std::abs(check.rhs),
                              1e-300});

  if (x == y) {
    check.applicable = true;
  } else {
    // geodesic from x to y must start with e_prime and end with e
    std::vector<int> parent(static_cast<size_t>(n), -1);
    std::vector<int> stack = {x};
    std::vector<char> seen(static_cast<size_t>(n), 0);
    seen[static_cast<size_t>(x)] = 1;
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      for (int eo : tree.out_edges(c)) {
        int d = tree.terminus(eo);
        if (!seen[static_cast<size_t>(d)]) {
          seen[static_cast<size_t>(d)] = 1;
          parent[static_cast<size_t>(d)] = c;
          stack.push_back(d);
        }
      }
    }
    std::vector<int> path = {y};
    while (path.back() != x) path.push_back(parent[static_cast<size_t>(path.back())]);
    std::reverse(path.begin(), path.end());
    check.applicable = path[1] == tree.terminus(e_prime) &&
                       path[path.size() - 2] == tree.origin(e);
  }
  return check;
}

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s.push_back(c);
  if (s.empty()) throw Error(ErrorKind::Malformed, "empty complex literal");

  auto parse_part = [](const std::string& part) -> double {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    size_t used = 0;
    double value = std::stod(part, &used);
    if (used != part.size())
      throw Error(ErrorKind::Malformed, "bad complex literal part '" + part +
                                            "'");
    return value;
  };

  try {
    if (s.back() == 'i' || s.back() == 'I') {
      std::string body = s.substr(0, s.size() - 1);
      // split at the sign that separates real and imaginary parts
      for (size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' &&
            body[i - 1] != 'E') {
          return Complex(parse_part(body.substr(0, i)),
                         parse_part(body.substr(i)));
        }
      }
      return Complex(0.0, parse_part(body));
    }
    return Complex(parse_part(s), 0.0);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Malformed,
                "bad complex literal '" + std::string(text) + "'");
  }
}

} // namespace nbw
