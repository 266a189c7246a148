#pragma once

#include <utility>

#include "nbwalk/graph.hpp"
#include "nbwalk/types.hpp"

namespace nbw {

// Matrix builders for the walk operators on l2(V, pi) with pi(x) = D(x) and
// on l2(B, U) with U uniform. All matrices are materialized dense; at the
// sizes this library targets the determinant checks need dense anyway.

// A(x,y) = 1 iff x ~ y.
Matrix adjacency_matrix(const Graph& g);

// P = D^{-1} A, the simple-random-walk transition operator. Row-stochastic,
// self-adjoint on l2(V, pi): D^{1/2} P D^{-1/2} is symmetric.
Matrix transition_matrix(const Graph& g);

// Hashimoto matrix: B(e,e') = 1 iff t(e') = o(e) and e' != reverse(e).
Matrix hashimoto_matrix(const Graph& g);

// S = diag(1/Q(o(e))) B, the non-backtracking transfer operator.
// Stochastic in both directions: S 1 = 1 and 1^T S = 1^T.
Matrix nb_transfer_matrix(const Graph& g);

// (A_p + W, B_p): the weighted adjacency plus potential on vertices, and the
// weighted Hashimoto matrix B_p(e,e') = p(e') on the sparsity pattern of B.
std::pair<Matrix, Matrix> schrodinger_matrices(const Graph& g,
                                               const Weights& w);

// O: |B| x |V| with (O f)(e) = f(o(e)); isometric from l2(V,pi) to l2(B,U).
Matrix origin_lift(const Graph& g);

// T: |B| x |V| with (T f)(e) = f(t(e)). Satisfies S T = O.
Matrix terminus_lift(const Graph& g);

// cP: |V| x |B| averaging over outgoing edges; O * cP is a projector on B.
Matrix origin_average(const Graph& g);

// iota: the |B| x |B| edge-reversal permutation.
Matrix reversal_matrix(const Graph& g);

// Oblique splitting of a mean-zero edge function into
//   f = origin_part + terminus_part + complement
// with origin_part in O(l2_0(V,pi)), terminus_part in T(l2_0(V,pi)), and the
// complement having zero outgoing and incoming sums at every vertex.
// Solved as a least-squares system on the concatenated lifted bases of the
// mean-zero vertex space (the two images are not orthogonal to each other).
// Requires g connected and non-bipartite; otherwise the sum is not direct.
struct EdgeDecomposition {
  CVector origin_part;
  CVector terminus_part;
  CVector complement;
};

EdgeDecomposition decompose(const Graph& g, const CVector& f);

struct DecompositionReport {
  int dim_origin = 0;
  int dim_terminus = 0;
  int dim_complement = 0;     // measured: 2|E| - 2|V| + 1 when hypotheses hold
  int rank_minus_one = 0;     // r - 1, reported alongside for comparison
  double max_orthogonality_residual = 0.0;  // worst vertex-sum of a complement
};

DecompositionReport decomposition_report(const Graph& g);

// Both sides of the Dirichlet identity
//   (1/2) sum_x (1/D(x)) sum_{y,y'~x} |f(y)-f(y')|^2 = <f, (I-P^2) f>_pi,
// which holds for every vertex function f.
std::pair<double, double> dirichlet_identity(const Graph& g, const CVector& f);

} // namespace nbw
