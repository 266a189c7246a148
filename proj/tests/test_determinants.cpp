#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "nbwalk/determinants.hpp"
#include "nbwalk/errors.hpp"
#include "nbwalk/operators.hpp"

using namespace nbw;
using doctest::Approx;

TEST_CASE("log_det matches the direct determinant") {
  CMatrix m = CMatrix::Random(9, 9);
  Complex direct = m.determinant();
  Complex via_log = std::exp(log_det(m));
  CHECK(std::abs(direct - via_log) < 1e-12 * std::abs(direct));
}

TEST_CASE("green determinant identity: triangle and K4, unweighted") {
  DetReport tri = green_det_check(testing::triangle(), nullptr, Complex(0, 2),
                              1e-10);
  CHECK(tri.tag == IdentityTag::GreenDet);
  CHECK(tri.max_rel_error < 1e-10);
  CHECK(tri.within_tol);

  DetReport k4 = green_det_check(testing::k4(), nullptr, Complex(1, 1), 1e-10);
  CHECK(k4.max_rel_error < 1e-10);
}

TEST_CASE("green determinant identity: weighted variants") {
  Graph k4 = testing::k4();
  // p(x,y) = (D(x)D(y))^{-1/2}: A_p is the transition operator up to
  // conjugation, so its characteristic polynomial appears on the right side
  Weights conj;
  conj.W.assign(4, 0.0);
  for (const auto& [u, v] : k4.undirected_edges())
    conj.p.push_back(1.0 / std::sqrt(double(k4.degree(u)) * k4.degree(v)));
  DetReport with_conj = green_det_check(k4, &conj, Complex(0, 2), 1e-10);
  CHECK(with_conj.tag == IdentityTag::GreenDetWeighted);
  CHECK(with_conj.max_rel_error < 1e-10);
  // similarity: det(zI - A_p) equals det(zI - P)
  auto [ap, bp] = schrodinger_matrices(k4, conj);
  Complex z(0, 2);
  Complex det_ap =
      (z * CMatrix::Identity(4, 4) - ap.cast<Complex>()).determinant();
  Complex det_p =
      (z * CMatrix::Identity(4, 4) - transition_matrix(k4).cast<Complex>())
          .determinant();
  CHECK(std::abs(det_ap - det_p) < 1e-12 * std::abs(det_p));

  // random weights and potential
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Graph g = testing::connected_sample(
        [](std::uint64_t s) { return random_min_degree(11, 2, 5, s); },
        19 + seed, false);
    Weights w = testing::random_weights(g, seed);
    DetReport report = green_det_check(g, &w, Complex(0.5, 0.5), 1e-8);
    CHECK(report.max_rel_error < 1e-8);
  }
}

TEST_CASE("ihara: closed forms on the triangle and C4") {
  // triangle: det(I - uB) = (1-u^3)^2 and the vertex side expands to
  // (1-u)^2 (1+u+u^2)^2
  Graph tri = testing::triangle();
  Matrix b = hashimoto_matrix(tri);
  for (const auto& report : ihara_check(tri, 25, 1e-12)) {
    for (const auto& sample : report.samples) {
      Complex u = sample.param;
      Complex closed = std::pow(1.0 - u * u * u, 2);
      Complex lhs = (CMatrix::Identity(6, 6) - u * b.cast<Complex>())
                        .determinant();
      CHECK(std::abs(lhs - closed) < 1e-12);
      CHECK(sample.rel_error < 1e-12);
    }
  }

  // C4: det(I - uB) = (1-u^4)^2, via A-eigenvalues {2, 0, 0, -2}
  Graph c4 = make_cycle(4);
  Matrix b4 = hashimoto_matrix(c4);
  for (const auto& report : ihara_check(c4, 25, 1e-12)) {
    for (const auto& sample : report.samples) {
      Complex u = sample.param;
      Complex closed = std::pow(1.0 - u * u * u * u, 2);
      Complex lhs = (CMatrix::Identity(8, 8) - u * b4.cast<Complex>())
                        .determinant();
      CHECK(std::abs(lhs - closed) < 1e-12);
      CHECK(sample.rel_error < 1e-12);
    }
  }
}

TEST_CASE("ihara: refuses disconnected and rank-0 inputs") {
  Graph two = Graph::from_edge_list_text("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n");
  CHECK_THROWS_AS(ihara_check(two, 0, 1e-9), Error);
  try {
    ihara_check(testing::path_graph(4), 0, 1e-9);
    FAIL("expected SampleAtPole");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SampleAtPole);
  }
}

TEST_CASE("ihara: K4 and general graphs at the default sample count") {
  auto reports = ihara_check(testing::k4(), 25, 1e-9);
  REQUIRE(reports.size() == 2);  // general + regular variant
  CHECK(reports[0].tag == IdentityTag::IharaGeneral);
  CHECK(reports[1].tag == IdentityTag::IharaRegular);
  for (const auto& r : reports) CHECK(r.max_rel_error < 1e-9);

  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Graph g = testing::connected_sample(
        [](std::uint64_t s) { return random_min_degree(12, 2, 6, s); },
        5 + seed, false);
    auto rs = ihara_check(g, 0, 1e-9);
    CHECK(rs.front().samples.size() ==
          static_cast<size_t>(2 * g.directed_count() + 1));
    CHECK(rs.front().max_rel_error < 1e-9);
  }
}

TEST_CASE("regular reduction") {
  DetReport k4 = regular_reduction_check(testing::k4(), Complex(0, 2), 1e-9);
  CHECK(k4.max_rel_error < 1e-9);
  DetReport pet =
      regular_reduction_check(testing::petersen(), Complex(1, 1), 1e-9);
  CHECK(pet.max_rel_error < 1e-9);
  DetReport tri =
      regular_reduction_check(testing::triangle(), Complex(0, 2), 1e-9);
  CHECK(tri.max_rel_error < 1e-9);
  CHECK_THROWS_AS(
      regular_reduction_check(random_min_degree(10, 2, 4, 3), Complex(0, 2),
                              1e-9),
      Error);
}

TEST_CASE("intertwining residual") {
  CHECK(intertwining_residual(testing::triangle(), Complex(0, 2)) < 1e-9);
  CHECK(intertwining_residual(testing::k4(), Complex(1, 1)) < 1e-9);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Graph g = testing::connected_sample(
        [](std::uint64_t s) { return random_min_degree(10, 2, 5, s); },
        23 + seed, false);
    CHECK(intertwining_residual(g, Complex(0.5, 0.5)) < 1e-9);
  }
}

TEST_CASE("intertwining residual is sensitive to a corrupted field") {
  Graph k4 = testing::k4();
  Complex z(1, 1);
  ZetaField field = solve_zeta(k4, nullptr, z);
  field.zeta(0) = -field.zeta(0);
  // rebuild the relation by hand with the corrupted field
  CMatrix bstar = hashimoto_matrix(k4).transpose().cast<Complex>();
  CMatrix zinv = CVector(field.zeta.cwiseInverse()).asDiagonal();
  CMatrix h = CMatrix::Zero(4, 12), l = CMatrix::Zero(4, 12);
  for (int e = 0; e < 12; ++e) {
    h(k4.terminus(e), e) += field.zeta(e) * 0.5 / field.m(k4.origin(e));
    h(k4.origin(e), e) -= 0.5 / field.m(k4.terminus(e));
    l(k4.origin(e), e) = 0.5 / field.m(k4.origin(e));
  }
  CMatrix residual =
      h * (zinv - bstar) -
      (adjacency_matrix(k4).cast<Complex>() - z * CMatrix::Identity(4, 4)) * l;
  CHECK(residual.cwiseAbs().maxCoeff() > 1e-2);
}

TEST_CASE("detK: determinant equals the edge product, blockwise too") {
  for (Complex z : {Complex(0, 2), Complex(1, 1)}) {
    for (const Graph& g : {testing::triangle(), testing::k4()}) {
      DetReport report = detK_check(g, z, 1e-10);
      CHECK(report.max_rel_error < 1e-10);

      ZetaField field = solve_zeta(g, nullptr, z);
      CMatrix k = pair_block_matrix(g, field);
      for (int idx = 0; idx < g.edge_count(); ++idx) {
        int e = 2 * idx;
        int er = 2 * idx + 1;
        Complex block_det = k(e, e) * k(er, er) - k(er, e) * k(e, er);
        int x = g.origin(e), y = g.terminus(e);
        Complex expected = (1.0 - field.zeta(e) * field.zeta(er)) /
                           (4.0 * field.m(x) * field.m(y));
        CHECK(std::abs(block_det - expected) < 1e-12);
        CHECK(std::abs(block_det - (-field.edge_green(idx))) < 1e-10);
      }
    }
  }
}

TEST_CASE("kernel characterization and inverse action") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    Graph g = testing::connected_sample(
        [](std::uint64_t s) { return random_min_degree(9, 2, 4, s); },
        41 + seed, false);
    CHECK(kernel_characterization_residual(g) < 1e-9);
    CHECK(kernel_inverse_action_residual(g, Complex(0, 1)) < 1e-9);
  }
  CHECK(kernel_characterization_residual(testing::triangle()) < 1e-12);
  CHECK(kernel_inverse_action_residual(testing::k4(), Complex(1, 1)) < 1e-9);
}
