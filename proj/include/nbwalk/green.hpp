#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "nbwalk/graph.hpp"
#include "nbwalk/types.hpp"

namespace nbw {

// Green-function data at a spectral parameter z in the upper half-plane.
//
// zeta(e) for e = (w, v) is minus the Green function at v of the universal
// cover with the branch through w deleted; m, the vertex Green function
// Gv(v) = -1/(2 m(v)) and the undirected-edge Green function Ge are derived
// from it. In the weighted case the edge recursion carries p(v,u)^2 on the
// child terms and Ge(w,v) = p(w,v) zeta(w,v) Gv(w); at p = 1, W = 0 this is
// the unweighted system verbatim.
struct ZetaField {
  Complex z;
  CVector zeta;          // per directed edge
  CVector m;             // per vertex
  CVector vertex_green;  // Gv, per vertex; Im > 0
  CVector edge_green;    // Ge, per undirected edge (reversal invariant)
  std::optional<Weights> weights;
  int iterations = 0;
  double final_update = 0.0;
  double residual = 0.0;  // max residual over the resolvent identities
};

// Fixed-point solve of the edge recursion
//   zeta(w,v) = 1 / (z - W(v) - sum_{u ~ v, u != w} p(v,u)^2 zeta(v,u)),
// initialized at 1/z, synchronous sweeps, sup-norm stopping rule.
// Pass w = nullptr for the unweighted system. Throws NonConvergence with the
// last update norm in the message when max_iter is hit, and checks the
// Herglotz signs (Im Gv > 0, Im zeta < 0) and the reversal consistency of Ge
// on the converged field.
ZetaField solve_zeta(const Graph& g, const Weights* w, Complex z,
                     double tol = 1e-12, int max_iter = 100000);

// Max absolute residual over the four identity families: the vertex and edge
// equations and both reversal identities, evaluated at every vertex / edge.
double resolvent_residuals(const Graph& g, const ZetaField& field);

// On a (q+1)-regular graph zeta is the constant Herglotz root of
// z = q zeta + 1/zeta and Gv = zeta/(zeta^2-1), Ge = zeta^2/(zeta^2-1).
// Returns the worst deviation of the field from these closed forms.
double regular_closed_form_residual(const Graph& g, const ZetaField& field);

// Finite truncation of the universal cover: the tree of non-backtracking
// paths from root of length <= depth. Leaves produced by the depth cut are
// flagged; their missing children are the truncation artifact.
struct CoverTree {
  Graph tree;
  int root = 0;
  std::vector<int> base_vertex;   // cover vertex -> vertex of g
  std::vector<bool> truncated;
};

CoverTree truncated_cover(const Graph& g, int root, int depth);

// Exact Green data on a finite tree by dense inversion: the full table
// G = (A_p + W - z)^{-1}, zeta per directed edge from the branch-deleted
// subtree, and m(v) = -1/(2 G(v,v)). Intended for small trees; the per-edge
// inversions are cubic.
struct TreeGreenTables {
  CMatrix green;
  CVector zeta;
  CVector m;
};

TreeGreenTables tree_green_oracle(const Graph& tree, const Weights* w,
                                  Complex z);

// zeta at one directed edge of a (possibly large) tree via a single sparse
// solve on the branch-deleted component.
Complex tree_zeta_at(const Graph& tree, const Weights* w, Complex z, int e);

// Entrywise check of the non-backtracking resolvent against the tree Green
// function: with x = o(e'), y = t(e),
//   delta_{x=y} + ((zeta^{-1} I - B)^{-1})(e, e') = -2 m(x) (A - z)^{-1}(x, y).
// The identity is the matrix form of the path-product formula, so it applies
// exactly when e' and e are the first and last edges of the x -> y geodesic
// (all x = y pairs included); `applicable` reports that predicate and the
// series side vanishes on inapplicable pairs.
struct SeriesCheck {
  Complex lhs;
  Complex rhs;
  double rel_error = 0.0;
  bool applicable = false;
};

SeriesCheck resolvent_series_check(const Graph& tree, Complex z, int e,
                                   int e_prime);

// Parses "a+bi" decimal literals: "2i", "1+i", "-1.3+0.7i", "0.5", "i", ...
Complex parse_complex(std::string_view text);

} // namespace nbw
