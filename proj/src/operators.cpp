#include "nbwalk/operators.hpp"

#include <cmath>
#include <random>

#include "nbwalk/errors.hpp"

namespace nbw {

Matrix adjacency_matrix(const Graph& g) {
  const int n = g.vertex_count();
  Matrix a = Matrix::Zero(n, n);
  for (const auto& [u, v] : g.undirected_edges()) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

Matrix transition_matrix(const Graph& g) {
  const int n = g.vertex_count();
  Matrix p = adjacency_matrix(g);
  for (int x = 0; x < n; ++x) p.row(x) /= static_cast<double>(g.degree(x));
  return p;
}

Matrix hashimoto_matrix(const Graph& g) {
  const int nb = g.directed_count();
  Matrix b = Matrix::Zero(nb, nb);
  for (int e = 0; e < nb; ++e) {
    // edges e' with t(e') = o(e) are the reverses of the out-edges at o(e)
    for (int out : g.out_edges(g.origin(e))) {
      int ep = Graph::reverse(out);
      if (ep != Graph::reverse(e)) b(e, ep) = 1.0;
    }
  }
  return b;
}

Matrix nb_transfer_matrix(const Graph& g) {
  Matrix s = hashimoto_matrix(g);
  for (int e = 0; e < g.directed_count(); ++e)
    s.row(e) /= static_cast<double>(g.branching(g.origin(e)));
  return s;
}

std::pair<Matrix, Matrix> schrodinger_matrices(const Graph& g,
                                               const Weights& w) {
  if (static_cast<int>(w.p.size()) != g.edge_count() ||
      static_cast<int>(w.W.size()) != g.vertex_count())
    throw Error(ErrorKind::WeightMismatch,
                "weights do not match the graph");
  const int n = g.vertex_count();
  Matrix apw = Matrix::Zero(n, n);
  for (int k = 0; k < g.edge_count(); ++k) {
    const auto& [u, v] = g.undirected_edges()[static_cast<size_t>(k)];
    apw(u, v) = w.p[static_cast<size_t>(k)];
    apw(v, u) = w.p[static_cast<size_t>(k)];
  }
  for (int x = 0; x < n; ++x) apw(x, x) = w.W[static_cast<size_t>(x)];

  const int nb = g.directed_count();
  Matrix bp = Matrix::Zero(nb, nb);
  for (int e = 0; e < nb; ++e) {
    for (int out : g.out_edges(g.origin(e))) {
      int ep = Graph::reverse(out);
      if (ep != Graph::reverse(e)) bp(e, ep) = w.p_of_directed(ep);
    }
  }
  return {apw, bp};
}

Matrix origin_lift(const Graph& g) {
  Matrix o = Matrix::Zero(g.directed_count(), g.vertex_count());
  for (int e = 0; e < g.directed_count(); ++e) o(e, g.origin(e)) = 1.0;
  return o;
}

Matrix terminus_lift(const Graph& g) {
  Matrix t = Matrix::Zero(g.directed_count(), g.vertex_count());
  for (int e = 0; e < g.directed_count(); ++e) t(e, g.terminus(e)) = 1.0;
  return t;
}

Matrix origin_average(const Graph& g) {
  Matrix cp = Matrix::Zero(g.vertex_count(), g.directed_count());
  for (int e = 0; e < g.directed_count(); ++e)
    cp(g.origin(e), e) = 1.0 / static_cast<double>(g.degree(g.origin(e)));
  return cp;
}

Matrix reversal_matrix(const Graph& g) {
  Matrix iota = Matrix::Zero(g.directed_count(), g.directed_count());
  for (int e = 0; e < g.directed_count(); ++e) iota(e, Graph::reverse(e)) = 1.0;
  return iota;
}

namespace {

// Orthonormal basis (standard inner product) of the complement of the degree
// vector. a is pi-orthogonal to constants iff a . d = 0, so the columns span
// the mean-zero vertex space l2_0(V, pi).
Matrix meanzero_vertex_basis(const Graph& g) {
  const int n = g.vertex_count();
  Vector d(n);
  for (int v = 0; v < n; ++v) d(v) = static_cast<double>(g.degree(v));
  Eigen::HouseholderQR<Matrix> qr(d);
  Matrix q = qr.householderQ();
  return q.rightCols(n - 1);
}

void require_decomposable(const Graph& g) {
  if (!g.is_connected())
    throw Error(ErrorKind::Disconnected,
                "decomposition needs a connected graph");
  if (g.is_bipartite())
    throw Error(ErrorKind::Bipartite,
                "decomposition is not direct on bipartite graphs");
}

} // namespace

EdgeDecomposition decompose(const Graph& g, const CVector& f) {
  require_decomposable(g);
  const int nb = g.directed_count();
  if (f.size() != nb)
    throw Error(ErrorKind::WeightMismatch, "edge function has wrong length");
  double norm = f.norm();
  if (std::abs(f.sum()) > 1e-10 * std::max(norm, 1e-300))
    throw Error(ErrorKind::NotMeanZero,
                "edge function is not orthogonal to constants");

  Matrix z = meanzero_vertex_basis(g);
  const int n = g.vertex_count();
  Matrix basis(nb, 2 * (n - 1));
  basis.leftCols(n - 1) = origin_lift(g) * z;
  basis.rightCols(n - 1) = terminus_lift(g) * z;

  CMatrix cbasis = basis.cast<Complex>();
  CVector coeff = cbasis.colPivHouseholderQr().solve(f);

  EdgeDecomposition out;
  out.origin_part = cbasis.leftCols(n - 1) * coeff.head(n - 1);
  out.terminus_part = cbasis.rightCols(n - 1) * coeff.tail(n - 1);
  out.complement = f - out.origin_part - out.terminus_part;
  return out;
}

DecompositionReport decomposition_report(const Graph& g) {
  require_decomposable(g);
  const int n = g.vertex_count();
  const int nb = g.directed_count();
  Matrix z = meanzero_vertex_basis(g);
  Matrix oz = origin_lift(g) * z;
  Matrix tz = terminus_lift(g) * z;
  Matrix basis(nb, 2 * (n - 1));
  basis.leftCols(n - 1) = oz;
  basis.rightCols(n - 1) = tz;

  auto rank_of = [](const Matrix& m) {
    Eigen::ColPivHouseholderQR<Matrix> qr(m);
    qr.setThreshold(1e-9);
    return static_cast<int>(qr.rank());
  };

  DecompositionReport rep;
  rep.dim_origin = rank_of(oz);
  rep.dim_terminus = rank_of(tz);
  rep.dim_complement = (nb - 1) - rank_of(basis);
  rep.rank_minus_one = g.rank() - 1;

  // Certify the vertex-sum constraints of the complement on a fixed probe
  // set of mean-zero edge functions.
  std::mt19937_64 rng(20240u);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  for (int probe = 0; probe < 8; ++probe) {
    CVector f(nb);
    for (int e = 0; e < nb; ++e) f(e) = Complex(gauss(rng), gauss(rng));
    f.array() -= f.mean();
    EdgeDecomposition dec = decompose(g, f);
    CVector by_origin = CVector::Zero(n), by_terminus = CVector::Zero(n);
    for (int e = 0; e < nb; ++e) {
      by_origin(g.origin(e)) += dec.complement(e);
      by_terminus(g.terminus(e)) += dec.complement(e);
    }
    double scale = std::max(f.norm(), 1e-300);
    worst = std::max(worst, by_origin.cwiseAbs().maxCoeff() / scale);
    worst = std::max(worst, by_terminus.cwiseAbs().maxCoeff() / scale);
  }
  rep.max_orthogonality_residual = worst;
  return rep;
}

std::pair<double, double> dirichlet_identity(const Graph& g, const CVector& f) {
  const int n = g.vertex_count();
  if (f.size() != n)
    throw Error(ErrorKind::WeightMismatch, "vertex function has wrong length");
  double lhs = 0.0;
  for (int x = 0; x < n; ++x) {
    const auto& out = g.out_edges(x);
    double local = 0.0;
    for (int e : out)
      for (int ep : out)
        local += std::norm(f(g.terminus(e)) - f(g.terminus(ep)));
    lhs += 0.5 * local / static_cast<double>(g.degree(x));
  }
  CVector pf = CVector::Zero(n);
  for (int x = 0; x < n; ++x) {
    Complex sum = 0.0;
    for (int e : g.out_edges(x)) sum += f(g.terminus(e));
    pf(x) = sum / static_cast<double>(g.degree(x));
  }
  CVector p2f = CVector::Zero(n);
  for (int x = 0; x < n; ++x) {
    Complex sum = 0.0;
    for (int e : g.out_edges(x)) sum += pf(g.terminus(e));
    p2f(x) = sum / static_cast<double>(g.degree(x));
  }
  Complex rhs = 0.0;
  for (int x = 0; x < n; ++x)
    rhs += static_cast<double>(g.degree(x)) *
           (std::conj(f(x)) * (f(x) - p2f(x)));
  return {lhs, rhs.real()};
}

} // namespace nbw
