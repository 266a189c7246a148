#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "nbwalk/errors.hpp"
#include "nbwalk/spectral.hpp"

using namespace nbw;
using doctest::Approx;

TEST_CASE("simple walk gap: triangle 3/4, K4 8/9, bipartite 0") {
  // triangle: P spectrum {1, -1/2, -1/2}, so P^2 on mean-zero is {1/4}
  CHECK(simple_walk_gap(testing::triangle()) == Approx(0.75).epsilon(1e-12));
  // K4: P spectrum {1, -1/3}
  CHECK(simple_walk_gap(testing::k4()) == Approx(8.0 / 9.0).epsilon(1e-12));
  CHECK(simple_walk_gap(make_cycle(4)) == 0.0);

  Graph two_triangles =
      Graph::from_edge_list_text("0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n");
  CHECK_THROWS_AS(simple_walk_gap(two_triangles), Error);
}

TEST_CASE("explicit gap bound") {
  CHECK(explicit_gap_bound(4, 0.0) == 0.0);
  // Q = 3, beta = 8/9: the second term 6 Q^4 / beta = 546.75 dominates down
  const double beta = 8.0 / 9.0;
  const double expected = (beta / 81.0) / ((1.0 + 546.75) * (1.0 + 546.75));
  CHECK(explicit_gap_bound(4, beta) == Approx(expected).epsilon(1e-14));
  CHECK(expected == Approx(3.6576e-8).epsilon(1e-4));
  // monotone sample
  CHECK(explicit_gap_bound(4, 0.9) > explicit_gap_bound(4, 0.5));
  CHECK(explicit_gap_bound(4, 0.5) > 0.0);
  CHECK_THROWS_AS(explicit_gap_bound(2, 0.5), Error);
}

TEST_CASE("nonbacktracking gap: triangle 0, K4 frozen value") {
  // the triangle's transfer operator is a permutation, so S*^2 S^2 = I
  CHECK(nonbacktracking_gap(testing::triangle()) == Approx(0.0).epsilon(1e-12));
  // frozen from an independent dense eigensolve
  CHECK(nonbacktracking_gap(testing::k4()) ==
        Approx(0.5899029491994479).epsilon(1e-9));
  CHECK(nonbacktracking_gap(testing::k4()) >=
        explicit_gap_bound(3, simple_walk_gap(testing::k4())));
  // bipartite inputs still get a gap value (hypotheses fail elsewhere)
  CHECK(nonbacktracking_gap(make_cycle(4)) == Approx(0.0).epsilon(1e-12));
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    Graph g = testing::connected_sample(
        [](std::uint64_t s) { return random_min_degree(10, 2, 6, s); }, seed,
        false);
    double gap = nonbacktracking_gap(g);
    CHECK(gap >= 0.0);
    CHECK(gap <= 1.0);
  }
}

TEST_CASE("restricted transfer norms on K4") {
  Graph k4 = testing::k4();
  CHECK(restricted_transfer_norm(k4, 1) == Approx(1.0).epsilon(1e-10));
  const double c = explicit_gap_bound(3, simple_walk_gap(k4));
  CHECK(restricted_transfer_norm(k4, 2) <= std::sqrt(1.0 - c) + 1e-10);
  CHECK(restricted_transfer_norm(k4, 8) <= (1.0 - c) * (1.0 - c) + 1e-10);
  // frozen from an independent dense SVD
  CHECK(restricted_transfer_norm(k4, 2) ==
        Approx(0.6403882032022075).epsilon(1e-9));
  CHECK_THROWS_AS(restricted_transfer_norm(make_cycle(4), 1), Error);
}

TEST_CASE("certify: K4 passes, triangle fails hypotheses") {
  SpectralCertificate cert = certify(testing::k4(), {1, 2, 4, 8});
  CHECK(cert.gap_bound_holds);
  CHECK(cert.converse_bound_holds);
  CHECK(cert.max_degree == 3);
  CHECK(cert.max_branching == 2);
  for (const auto& entry : cert.power_norm_bounds) CHECK(entry.ok);

  CHECK_THROWS_WITH_AS(certify(testing::triangle(), {1}),
                       doctest::Contains("min-degree-3"), Error);
  CHECK_THROWS_AS(certify(make_cycle(4), {1}), Error);
}

TEST_CASE("certify: property run on admissible random graphs") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    Graph g = testing::connected_sample(
        [](std::uint64_t s) { return random_min_degree(12, 3, 5, s); },
        7 + seed * 31, true);
    SpectralCertificate cert = certify(g, {1, 2, 4, 8, 12});
    CHECK(cert.gap_bound_holds);
    CHECK(cert.converse_bound_holds);
    CHECK(cert.beta > 0.0);
    CHECK(cert.nb_gap <= 1.0);
    CHECK(cert.power_norm_bounds.front().norm == Approx(1.0).epsilon(1e-10));
    for (const auto& entry : cert.power_norm_bounds) CHECK(entry.ok);
  }
}
