#include "nbwalk/determinants.hpp"

#include <cmath>
#include <numbers>

#include "nbwalk/errors.hpp"
#include "nbwalk/operators.hpp"

namespace nbw {

namespace {

double rel_error_of(Complex lhs, Complex rhs) {
  return std::abs(lhs - rhs) /
         std::max({std::abs(lhs), std::abs(rhs), 1e-300});
}

// Relative discrepancy of two determinants given their complex logs. Any
// 2*pi*k phase bookkeeping cancels inside exp.
double rel_error_from_logs(Complex log_lhs, Complex log_rhs) {
  Complex ratio = std::exp(log_lhs - log_rhs);
  return std::abs(ratio - 1.0) / std::max(std::abs(ratio), 1.0);
}

DetSample make_sample(Complex param, Complex log_lhs, Complex log_rhs) {
  DetSample s;
  s.param = param;
  s.lhs = std::exp(log_lhs);
  s.rhs = std::exp(log_rhs);
  s.rel_error = rel_error_from_logs(log_lhs, log_rhs);
  return s;
}

void finalize(DetReport& report, double tol) {
  report.tol = tol;
  report.max_rel_error = 0.0;
  for (const auto& s : report.samples)
    report.max_rel_error = std::max(report.max_rel_error, s.rel_error);
  report.within_tol = report.max_rel_error < tol;
}

CMatrix zeta_inverse_diag(const ZetaField& field) {
  return CMatrix(CVector(field.zeta.cwiseInverse()).asDiagonal());
}

} // namespace

std::string identity_name(IdentityTag tag) {
  switch (tag) {
    case IdentityTag::GreenDet: return "green_det";
    case IdentityTag::GreenDetWeighted: return "green_det_weighted";
    case IdentityTag::IharaGeneral: return "ihara_general";
    case IdentityTag::IharaRegular: return "ihara_regular";
    case IdentityTag::RegularReduction: return "regular_reduction";
    case IdentityTag::Intertwining: return "intertwining";
    case IdentityTag::DetK: return "detK";
  }
  return "unknown";
}

Complex log_det(const CMatrix& m) {
  Eigen::PartialPivLU<CMatrix> lu(m);
  const auto& factors = lu.matrixLU();
  Complex out = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    Complex d = factors(i, i);
    if (d == Complex(0.0, 0.0))
      throw Error(ErrorKind::SingularMatrix, "determinant is zero");
    out += std::log(d);
  }
  if (lu.permutationP().determinant() < 0)
    out += Complex(0.0, std::numbers::pi);
  return out;
}

DetReport green_det_check(const Graph& g, const Weights* w, Complex z,
                      double tol) {
  ZetaField field = solve_zeta(g, w, z);
  CMatrix nb_side = zeta_inverse_diag(field);
  if (w) {
    auto [apw, bp] = schrodinger_matrices(g, *w);
    nb_side -= bp.cast<Complex>();
  } else {
    nb_side -= hashimoto_matrix(g).cast<Complex>();
  }
  Complex log_lhs = log_det(nb_side);
  for (int k = 0; k < g.edge_count(); ++k) {
    Complex factor = -field.edge_green(k);
    if (w) factor /= w->p[static_cast<size_t>(k)];
    log_lhs += std::log(factor);
  }

  const int n = g.vertex_count();
  CMatrix char_side = z * CMatrix::Identity(n, n);
  if (w) {
    auto [apw, bp] = schrodinger_matrices(g, *w);
    char_side -= apw.cast<Complex>();
  } else {
    char_side -= adjacency_matrix(g).cast<Complex>();
  }
  Complex log_rhs = log_det(char_side);
  for (int v = 0; v < n; ++v) log_rhs += std::log(-field.vertex_green(v));

  DetReport report;
  report.tag = w ? IdentityTag::GreenDetWeighted : IdentityTag::GreenDet;
  report.samples.push_back(make_sample(z, log_lhs, log_rhs));
  if (n <= 20) {
    // direct products stay representable at this size
    DetSample& s = report.samples.back();
    Complex lhs = nb_side.determinant();
    for (int k = 0; k < g.edge_count(); ++k) {
      Complex factor = -field.edge_green(k);
      if (w) factor /= w->p[static_cast<size_t>(k)];
      lhs *= factor;
    }
    Complex rhs = char_side.determinant();
    for (int v = 0; v < n; ++v) rhs *= -field.vertex_green(v);
    s.lhs = lhs;
    s.rhs = rhs;
    s.rel_error = rel_error_of(lhs, rhs);
  }
  finalize(report, tol);
  return report;
}

std::vector<DetReport> ihara_check(const Graph& g, int sample_count,
                                   double tol) {
  if (!g.is_connected())
    throw Error(ErrorKind::Disconnected,
                "the Ihara identity uses the rank of a connected graph");
  if (g.rank() < 1)
    throw Error(ErrorKind::SampleAtPole,
                "rank 0 puts the (1-u^2)^{r-1} factor at a pole");
  const int nb = g.directed_count();
  const int n = g.vertex_count();
  const int count = std::max(sample_count, nb + nb + 1);
  const Matrix bmat = hashimoto_matrix(g);
  const Matrix amat = adjacency_matrix(g);
  Vector qdiag(n);
  for (int v = 0; v < n; ++v) qdiag(v) = static_cast<double>(g.branching(v));
  const bool regular = g.max_degree() == g.min_degree();

  DetReport general;
  general.tag = IdentityTag::IharaGeneral;
  DetReport classical;
  classical.tag = IdentityTag::IharaRegular;

  for (int j = 0; j < count; ++j) {
    // half-step offset: regular graphs put roots of both sides at u = +-1/2
    const double angle =
        2.0 * std::numbers::pi * (static_cast<double>(j) + 0.5) / count;
    const Complex u = 0.5 * Complex(std::cos(angle), std::sin(angle));
    const Complex log_lhs =
        log_det(CMatrix::Identity(nb, nb) - u * bmat.cast<Complex>());
    const Complex rank_factor =
        static_cast<double>(g.rank() - 1) * std::log(1.0 - u * u);

    CMatrix vertex_side =
        CMatrix::Identity(n, n) - u * amat.cast<Complex>();
    for (int v = 0; v < n; ++v) vertex_side(v, v) += u * u * qdiag(v);
    general.samples.push_back(
        make_sample(u, log_lhs, rank_factor + log_det(vertex_side)));

    if (regular) {
      const double q = static_cast<double>(g.max_degree() - 1);
      CMatrix reg_side = (1.0 + u * u * q) * CMatrix::Identity(n, n) -
                         u * amat.cast<Complex>();
      classical.samples.push_back(
          make_sample(u, log_lhs, rank_factor + log_det(reg_side)));
    }
  }
  finalize(general, tol);
  std::vector<DetReport> reports = {general};
  if (regular) {
    finalize(classical, tol);
    reports.push_back(classical);
  }
  return reports;
}

DetReport regular_reduction_check(const Graph& g, Complex z, double tol) {
  if (g.max_degree() != g.min_degree())
    throw Error(ErrorKind::NotRegular,
                "regular reduction needs a regular graph");
  ZetaField field = solve_zeta(g, nullptr, z);
  const Complex zeta = field.zeta.mean();
  const double q = static_cast<double>(g.max_degree() - 1);
  const int n = g.vertex_count();
  const int nb = g.directed_count();
  const Complex denom = zeta * zeta - 1.0;

  // direct non-backtracking side with closed-form Green values
  CMatrix nb_side = zeta_inverse_diag(field);
  nb_side -= hashimoto_matrix(g).cast<Complex>();
  const Complex log_direct =
      log_det(nb_side) +
      static_cast<double>(g.edge_count()) * std::log(-zeta * zeta / denom);

  // the same side evaluated through the classical Ihara formula at u = zeta
  const Matrix amat = adjacency_matrix(g);
  CMatrix reg_side = (1.0 + zeta * zeta * q) * CMatrix::Identity(n, n) -
                     zeta * amat.cast<Complex>();
  const Complex log_ihara =
      static_cast<double>(g.edge_count()) * std::log(-zeta * zeta / denom) -
      static_cast<double>(nb) * std::log(zeta) +
      static_cast<double>(g.rank() - 1) * std::log(1.0 - zeta * zeta) +
      log_det(reg_side);

  // characteristic polynomial side
  const Complex log_char =
      log_det(z * CMatrix::Identity(n, n) - amat.cast<Complex>()) +
      static_cast<double>(n) * std::log(-zeta / denom);

  DetReport report;
  report.tag = IdentityTag::RegularReduction;
  report.samples.push_back(make_sample(z, log_direct, log_char));
  report.samples.push_back(make_sample(z, log_ihara, log_char));
  finalize(report, tol);
  return report;
}

namespace {

// L and H of the intertwining relation, as |V| x |B| matrices.
CMatrix left_average_matrix(const Graph& g, const ZetaField& field) {
  CMatrix l = CMatrix::Zero(g.vertex_count(), g.directed_count());
  for (int e = 0; e < g.directed_count(); ++e)
    l(g.origin(e), e) = 0.5 / field.m(g.origin(e));
  return l;
}

CMatrix collapse_matrix(const Graph& g, const ZetaField& field) {
  CMatrix h = CMatrix::Zero(g.vertex_count(), g.directed_count());
  for (int e = 0; e < g.directed_count(); ++e) {
    h(g.terminus(e), e) += field.zeta(e) * 0.5 / field.m(g.origin(e));
    h(g.origin(e), e) -= 0.5 / field.m(g.terminus(e));
  }
  return h;
}

} // namespace

double intertwining_residual(const Graph& g, Complex z) {
  ZetaField field = solve_zeta(g, nullptr, z);
  const int n = g.vertex_count();
  CMatrix bstar = hashimoto_matrix(g).transpose().cast<Complex>();
  CMatrix lhs =
      collapse_matrix(g, field) * (zeta_inverse_diag(field) - bstar);
  CMatrix rhs = (adjacency_matrix(g).cast<Complex>() -
                 z * CMatrix::Identity(n, n)) *
                left_average_matrix(g, field);
  return (lhs - rhs).cwiseAbs().maxCoeff();
}

CMatrix pair_block_matrix(const Graph& g, const ZetaField& field) {
  const int nb = g.directed_count();
  CMatrix k = CMatrix::Zero(nb, nb);
  for (int e = 0; e < nb; ++e) {
    k(e, e) = -0.5 / field.m(g.terminus(e));
    k(Graph::reverse(e), e) = field.zeta(e) * 0.5 / field.m(g.origin(e));
  }
  return k;
}

DetReport detK_check(const Graph& g, Complex z, double tol) {
  ZetaField field = solve_zeta(g, nullptr, z);
  CMatrix k = pair_block_matrix(g, field);
  Complex log_lhs = log_det(k);
  Complex log_rhs = 0.0;
  for (int kk = 0; kk < g.edge_count(); ++kk)
    log_rhs += std::log(-field.edge_green(kk));

  DetReport report;
  report.tag = IdentityTag::DetK;
  report.samples.push_back(make_sample(z, log_lhs, log_rhs));
  finalize(report, tol);
  return report;
}

namespace {

Matrix origin_kernel_basis(const Graph& g) {
  Eigen::FullPivLU<Matrix> lu(origin_average(g));
  Matrix kernel = lu.kernel();
  for (int c = 0; c < kernel.cols(); ++c) kernel.col(c).normalize();
  return kernel;
}

} // namespace

double kernel_characterization_residual(const Graph& g) {
  Matrix kernel = origin_kernel_basis(g);
  Matrix bstar = hashimoto_matrix(g).transpose();
  Matrix iota = reversal_matrix(g);
  return (bstar * kernel + iota * kernel).cwiseAbs().maxCoeff();
}

double kernel_inverse_action_residual(const Graph& g, Complex z) {
  ZetaField field = solve_zeta(g, nullptr, z);
  CMatrix kernel = origin_kernel_basis(g).cast<Complex>();
  CMatrix bstar = hashimoto_matrix(g).transpose().cast<Complex>();
  CMatrix action = pair_block_matrix(g, field) *
                   (zeta_inverse_diag(field) - bstar);
  return (action * kernel + kernel).cwiseAbs().maxCoeff();
}

} // namespace nbw
