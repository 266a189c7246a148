#pragma once

#include <vector>

#include "nbwalk/graph.hpp"
#include "nbwalk/types.hpp"

namespace nbw {

// beta: 1 minus the largest eigenvalue of P^2 on the pi-orthogonal complement
// of constants. Computed on the symmetric conjugate N = D^{-1/2} A D^{-1/2}
// with the known top eigenvector deflated by explicit projection.
// Returns exactly 0 for bipartite graphs.
double simple_walk_gap(const Graph& g);

// c(D, beta) with Q = D - 1:
//   min( Q^{-4} beta / (2 (1 + Q^{-4} beta / 6)^2),
//        Q^{-4} beta / (1 + 6 Q^4 / beta)^2 ),
// the second term read as 0 when beta = 0. Requires max_degree >= 3.
double explicit_gap_bound(int max_degree, double beta);

// 1 minus the largest eigenvalue of (S^2)^T (S^2) restricted to the
// orthogonal complement of constants in l2(B, U).
double nonbacktracking_gap(const Graph& g);

// Largest singular value of Pi S^n Pi, Pi the mean-zero projector on B.
// Equals 1 at n = 1 (witness: terminus lifts of mean-zero vertex functions).
double restricted_transfer_norm(const Graph& g, int n);

struct PowerNormBound {
  int n = 0;
  double norm = 0.0;
  double bound = 0.0;  // (1 - c)^floor(n/4)
  bool ok = false;
};

struct SpectralCertificate {
  double beta = 0.0;
  double nb_gap = 0.0;
  double c_bound = 0.0;
  bool gap_bound_holds = false;         // nb_gap >= c_bound - 1e-10
  std::vector<PowerNormBound> power_norm_bounds;
  bool converse_bound_holds = false;         // beta >= nb_gap / Dmax^2 - 1e-10
  int max_degree = 0;
  int max_branching = 0;
};

// Runs the whole certificate. Requires connected, non-bipartite,
// min degree >= 3; otherwise throws HypothesesNotMet naming the failures.
SpectralCertificate certify(const Graph& g, const std::vector<int>& powers);

} // namespace nbw
