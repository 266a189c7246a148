#include "nbwalk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nbwalk/errors.hpp"
#include "nbwalk/operators.hpp"

namespace nbw {

namespace {

constexpr double kVerdictTol = 1e-10;

double top_eigenvalue(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym,
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

} // namespace

double simple_walk_gap(const Graph& g) {
  if (!g.is_connected())
    throw Error(ErrorKind::Disconnected,
                "spectral gap needs a connected graph");
  if (g.is_bipartite()) return 0.0;
  const int n = g.vertex_count();
  Vector dsqrt(n);
  for (int v = 0; v < n; ++v)
    dsqrt(v) = std::sqrt(static_cast<double>(g.degree(v)));
  Matrix nmat = adjacency_matrix(g);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) nmat(i, j) /= dsqrt(i) * dsqrt(j);
  Vector top = dsqrt / dsqrt.norm();
  Matrix proj = Matrix::Identity(n, n) - top * top.transpose();
  double lmax = top_eigenvalue(proj * (nmat * nmat) * proj);
  return std::clamp(1.0 - lmax, 0.0, 1.0);
}

double explicit_gap_bound(int max_degree, double beta) {
  if (max_degree < 3)
    throw Error(ErrorKind::DegreeTooSmall,
                "gap bound needs max degree >= 3, got " +
                    std::to_string(max_degree));
  if (beta <= 0.0) return 0.0;
  const double q4 = std::pow(static_cast<double>(max_degree - 1), 4);
  const double a = beta / q4;
  const double first = a / (2.0 * std::pow(1.0 + a / 6.0, 2));
  const double second = a / std::pow(1.0 + 6.0 * q4 / beta, 2);
  return std::min(first, second);
}

double nonbacktracking_gap(const Graph& g) {
  if (!g.is_connected())
    throw Error(ErrorKind::Disconnected,
                "non-backtracking gap needs a connected graph");
  const int nb = g.directed_count();
  Matrix s = nb_transfer_matrix(g);
  Matrix s2 = s * s;
  Matrix m = s2.transpose() * s2;
  Matrix proj = Matrix::Identity(nb, nb) -
                Matrix::Constant(nb, nb, 1.0 / static_cast<double>(nb));
  double lmax = top_eigenvalue(proj * m * proj);
  return std::clamp(1.0 - lmax, 0.0, 1.0);
}

double restricted_transfer_norm(const Graph& g, int n) {
  if (n < 1) throw Error(ErrorKind::Infeasible, "power must be >= 1");
  if (!g.is_connected())
    throw Error(ErrorKind::Disconnected,
                "restricted norm needs a connected graph");
  if (g.is_bipartite())
    throw Error(ErrorKind::Bipartite,
                "restricted norm needs a non-bipartite graph");
  const int nb = g.directed_count();
  Matrix s = nb_transfer_matrix(g);
  Matrix sn = s;
  for (int k = 1; k < n; ++k) sn = s * sn;
  Matrix proj = Matrix::Identity(nb, nb) -
                Matrix::Constant(nb, nb, 1.0 / static_cast<double>(nb));
  Matrix m = proj * sn * proj;
  double lmax = top_eigenvalue(m.transpose() * m);
  return std::sqrt(std::max(lmax, 0.0));
}

SpectralCertificate certify(const Graph& g, const std::vector<int>& powers) {
  ValidationReport report = validate(g);
  if (!report.meets_gap_hypotheses) {
    std::string failed;
    if (!report.is_connected) failed += " connected";
    if (report.is_bipartite) failed += " non-bipartite";
    if (report.min_degree < 3) failed += " min-degree-3";
    throw Error(ErrorKind::HypothesesNotMet,
                "certificate hypotheses not met:" + failed);
  }

  SpectralCertificate cert;
  cert.max_degree = g.max_degree();
  cert.max_branching = cert.max_degree - 1;
  cert.beta = simple_walk_gap(g);
  cert.nb_gap = nonbacktracking_gap(g);
  cert.c_bound = explicit_gap_bound(cert.max_degree, cert.beta);
  cert.gap_bound_holds = cert.nb_gap >= cert.c_bound - kVerdictTol;
  for (int n : powers) {
    PowerNormBound entry;
    entry.n = n;
    entry.norm = restricted_transfer_norm(g, n);
    entry.bound = std::pow(1.0 - cert.c_bound, n / 4);
    entry.ok = entry.norm <= entry.bound + kVerdictTol;
    cert.power_norm_bounds.push_back(entry);
  }
  double dd = static_cast<double>(cert.max_degree) * cert.max_degree;
  cert.converse_bound_holds = cert.beta >= cert.nb_gap / dd - kVerdictTol;
  return cert;
}

} // namespace nbw
