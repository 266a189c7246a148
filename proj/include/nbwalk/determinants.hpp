#pragma once

#include <string>
#include <vector>

#include "nbwalk/graph.hpp"
#include "nbwalk/green.hpp"
#include "nbwalk/types.hpp"

namespace nbw {

enum class IdentityTag {
  GreenDet,
  GreenDetWeighted,
  IharaGeneral,
  IharaRegular,
  RegularReduction,
  Intertwining,
  DetK,
};

std::string identity_name(IdentityTag tag);

struct DetSample {
  Complex param;  // z or u
  Complex lhs;
  Complex rhs;
  double rel_error = 0.0;  // |lhs-rhs| / max(|lhs|, |rhs|, eps)
};

struct DetReport {
  IdentityTag tag;
  std::vector<DetSample> samples;
  double max_rel_error = 0.0;
  double tol = 0.0;
  bool within_tol = true;
};

// Complex log-determinant via LU: log|det| + i arg accumulated from the
// factor diagonal. Exponentiating differences compares determinants whose
// direct values would over- or underflow.
Complex log_det(const CMatrix& m);

// Determinant identity between the non-backtracking side and the
// characteristic polynomial:
//   prod_{e in E} (-Ge(e)) * det(zeta^{-1} I - B)
//     = det(z I - A) * prod_x (-Gv(x)),
// with (-Ge(e))/p(e) and B_p, A_p + W in the weighted case. Products run
// over undirected edges (Ge is reversal invariant). Sides are compared in
// log space once |V| > 20.
DetReport green_det_check(const Graph& g, const Weights* w, Complex z, double tol);

// det(I - uB) = (1-u^2)^{r-1} det(I - uA + u^2 Q) sampled on the circle
// |u| = 1/2 at max(sample_count, 2|B|+1) points; on regular graphs the
// classical variant det(I - uB) = (1-u^2)^{r-1} det((1+u^2 q) I - uA) is
// checked as a second report.
std::vector<DetReport> ihara_check(const Graph& g, int sample_count,
                                   double tol);

// On a (q+1)-regular graph, substituting u = zeta into the classical Ihara
// formula must reproduce the determinant identity. Compares the direct
// non-backtracking side, the Ihara-substituted side, and the characteristic
// polynomial side.
DetReport regular_reduction_check(const Graph& g, Complex z, double tol);

// Max-norm residual of H (zeta^{-1} I - B*) = (A - z I) L where
//   L(x, e) = [o(e)=x] / (2 m(x)),
//   H(x, e) = [t(e)=x] zeta(e)/(2 m(o(e))) - [o(e)=x] / (2 m(t(e))),
// and B* is the transpose of the Hashimoto matrix (the identity composes
// edge-to-successor, the adjoint orientation of the builder's convention).
double intertwining_residual(const Graph& g, Complex z);

// K is block-diagonal over reversal pairs:
//   K delta_e = -(1/(2 m(y))) delta_e + (zeta(x,y)/(2 m(x))) delta_{rev(e)}
// for e = (x, y); det K must equal prod_{e in E} (-Ge(e)). Each 2x2 block
// determinant equals (2m(x))^{-1} (2m(y))^{-1} (1 - zeta(x,y) zeta(y,x)).
DetReport detK_check(const Graph& g, Complex z, double tol);
CMatrix pair_block_matrix(const Graph& g, const ZetaField& field);

// f has zero outgoing sums at every vertex  iff  B* f = -iota f.
// Returns the worst normalized violation over a kernel basis of the
// origin-averaging map.
double kernel_characterization_residual(const Graph& g);

// K (zeta^{-1} I - B*) acts as -I on that kernel.
double kernel_inverse_action_residual(const Graph& g, Complex z);

} // namespace nbw
