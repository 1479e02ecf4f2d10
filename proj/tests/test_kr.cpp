#include <doctest.h>

#include <cmath>

#include "credal/kr.hpp"
#include "credal/rng.hpp"
#include "oracles.hpp"

using namespace credal;

namespace {
AlphabetSchedule binary{{2}, 4};
MetricFamily geo = MetricFamily::geometric();

ModelPolytope halfline_polytope(const OutcomeWindow& w, double lo) {
  // {nu : nu(1) >= lo} on a two-outcome window.
  Constraint c{{0.0, -1.0}, -lo, false};
  return ModelPolytope(w, {c});
}
}  // namespace

TEST_CASE("lipschitz norm basics") {
  OutcomeWindow w = enumerate_window(History(), 1, binary);
  std::vector<double> zero{0.0, 0.0}, one{1.0, 1.0}, step{0.0, 1.0};
  CHECK(lipschitz_norm(zero, w, geo) == doctest::Approx(0.0));
  CHECK(lipschitz_norm(one, w, geo) == doctest::Approx(1.0));
  // Two outcomes at distance 1: max|f| + Lip = 1 + 1.
  CHECK(lipschitz_norm(step, w, geo) == doctest::Approx(2.0));

  CHECK(verify_lipschitz_ball(zero, 0.0, w, geo));
  CHECK(verify_lipschitz_ball(step, 2.0, w, geo));
  std::vector<double> scaled{0.0, 2.0};
  CHECK_FALSE(verify_lipschitz_ball(scaled, 2.0, w, geo));
}

TEST_CASE("kr distance identity and diameter") {
  OutcomeWindow w = enumerate_window(History(), 2, binary);
  FiniteMeasure u = FiniteMeasure::uniform(w);
  CHECK(kr_distance(u, u, geo) == doctest::Approx(0.0).epsilon(1e-9));

  RandomStream rng(11, RandomStream::Role::kFuzz);
  for (int i = 0; i < 25; ++i) {
    FiniteMeasure a(w, oracle::random_simplex_point(rng, w.size()));
    FiniteMeasure b(w, oracle::random_simplex_point(rng, w.size()));
    double d = kr_distance(a, b, geo);
    CHECK(d >= -1e-9);
    CHECK(d <= 2.0 + 1e-9);
    // Symmetry.
    CHECK(d == doctest::Approx(kr_distance(b, a, geo)).epsilon(1e-7));
  }
}

TEST_CASE("kr triangle inequality on random triples") {
  OutcomeWindow w = enumerate_window(History(), 2, binary);
  RandomStream rng(13, RandomStream::Role::kFuzz);
  for (int i = 0; i < 20; ++i) {
    FiniteMeasure a(w, oracle::random_simplex_point(rng, w.size()));
    FiniteMeasure b(w, oracle::random_simplex_point(rng, w.size()));
    FiniteMeasure c(w, oracle::random_simplex_point(rng, w.size()));
    CHECK(kr_distance(a, c, geo) <= kr_distance(a, b, geo) + kr_distance(b, c, geo) + 1e-6);
  }
}

TEST_CASE("dirac pair closed form, derived from the grid oracle") {
  // Verify the closed form against the brute-force oracle first, then pin the
  // LP against the closed form.
  for (int depth : {1, 2}) {
    OutcomeWindow w = enumerate_window(History(), depth, binary);
    for (int i = 0; i < w.size(); ++i) {
      for (int j = i + 1; j < w.size(); ++j) {
        const double r = rho(geo, w, i, j);
        const double formula = oracle::dirac_pair_distance(r);
        FiniteMeasure a = FiniteMeasure::dirac(w, i);
        FiniteMeasure b = FiniteMeasure::dirac(w, j);
        const double grid = oracle::grid_kr_distance(a, b, geo, 0.01);
        CHECK(grid <= formula + 1e-9);
        CHECK(formula - grid <= 2e-2);
        CHECK(kr_distance(a, b, geo) == doctest::Approx(formula).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("lp agrees with the grid oracle on random pairs") {
  RandomStream rng(17, RandomStream::Role::kFuzz);
  for (int depth : {1, 2}) {
    OutcomeWindow w = enumerate_window(History(), depth, binary);
    for (int i = 0; i < 10; ++i) {
      FiniteMeasure a(w, oracle::random_simplex_point(rng, w.size()));
      FiniteMeasure b(w, oracle::random_simplex_point(rng, w.size()));
      const double lp = kr_distance(a, b, geo);
      const double grid = oracle::grid_kr_distance(a, b, geo, 0.01);
      CHECK(grid <= lp + 1e-9);
      CHECK(lp - grid <= 2e-2);
    }
  }
}

TEST_CASE("tree and pairwise ball encodings are equivalent") {
  AlphabetSchedule ternary{{3}, 3};
  OutcomeWindow w = enumerate_window(History(), 2, ternary);
  RandomStream rng(19, RandomStream::Role::kFuzz);
  for (int i = 0; i < 15; ++i) {
    FiniteMeasure a(w, oracle::random_simplex_point(rng, w.size()));
    FiniteMeasure b(w, oracle::random_simplex_point(rng, w.size()));
    const double tree = kr_distance(a, b, geo, BallEncoding::kTree);
    const double pair = kr_distance(a, b, geo, BallEncoding::kPairwise);
    CHECK(tree == doctest::Approx(pair).epsilon(1e-8));
  }
  // Increasing weights are rejected by the tree encoding and served by the
  // pairwise one.
  MetricFamily inc = MetricFamily::from_weights({0.25, 1.0});
  FiniteMeasure a(w, oracle::random_simplex_point(rng, w.size()));
  FiniteMeasure b(w, oracle::random_simplex_point(rng, w.size()));
  CHECK_THROWS_AS(kr_distance(a, b, inc, BallEncoding::kTree), DomainError);
  CHECK(kr_distance(a, b, inc) >= 0.0);
}

TEST_CASE("distance to model: membership, singleton, halfline oracle") {
  OutcomeWindow w = enumerate_window(History(), 1, binary);

  SUBCASE("member has distance zero") {
    ModelPolytope m = halfline_polytope(w, 0.6);
    FiniteMeasure mu(w, {0.3, 0.7});
    ModelDistance d = distance_to_model(mu, m, geo);
    CHECK(d.distance == doctest::Approx(0.0).epsilon(1e-8));
  }

  SUBCASE("singleton polytope reduces to kr distance") {
    OutcomeWindow w2 = enumerate_window(History(), 2, binary);
    RandomStream rng(23, RandomStream::Role::kFuzz);
    for (int i = 0; i < 10; ++i) {
      std::vector<double> vw = oracle::random_simplex_point(rng, w2.size());
      FiniteMeasure nu(w2, vw);
      std::vector<Constraint> rows;
      for (int x = 0; x < w2.size(); ++x) {
        std::vector<double> e(w2.size(), 0.0);
        e[x] = 1.0;
        rows.push_back({e, vw[x], true});
      }
      ModelPolytope m(w2, rows);
      FiniteMeasure mu(w2, oracle::random_simplex_point(rng, w2.size()));
      ModelDistance d = distance_to_model(mu, m, geo);
      CHECK(d.distance == doctest::Approx(kr_distance(mu, nu, geo)).epsilon(1e-7));
    }
  }

  SUBCASE("halfline validated against the two-level grid oracle") {
    ModelPolytope m = halfline_polytope(w, 0.6);
    FiniteMeasure mu(w, {0.8, 0.2});
    ModelDistance d = distance_to_model(mu, m, geo);
    const double grid = oracle::grid_distance_to_halfline(mu, 0.6, geo, 1e-3, 5e-3);
    CHECK(std::fabs(d.distance - grid) <= 2e-2);
    // Witness certificate: within the ball, and separating at value >= r.
    CHECK(d.witness.norm_bound <= 1.0 + 1e-7);
    for (double p : {0.6, 0.7, 0.85, 1.0}) {
      FiniteMeasure nu(w, {1.0 - p, p});
      CHECK(nu.expectation(d.witness.values) - mu.expectation(d.witness.values) >=
            d.distance - 1e-7);
    }
  }
}

TEST_CASE("distance witness guarantee on random polytopes") {
  OutcomeWindow w = enumerate_window(History(), 2, binary);
  RandomStream rng(29, RandomStream::Role::kFuzz);
  int nontrivial = 0;
  for (int trial = 0; trial < 60; ++trial) {
    // Random vertex hull with 3 vertices.
    std::vector<std::vector<double>> verts;
    for (int v = 0; v < 3; ++v) verts.push_back(oracle::random_simplex_point(rng, w.size()));
    ModelPolytope m = ModelPolytope::full_simplex(w);
    m.set_vertices(verts);
    FiniteMeasure mu(w, oracle::random_simplex_point(rng, w.size()));
    ModelDistance d = distance_to_model(mu, m, geo);
    CHECK(d.distance >= -1e-9);
    CHECK(d.witness.norm_bound <= 1.0 + 1e-7);
    CHECK(verify_lipschitz_ball(d.witness.values, 1.0, w, geo, 1e-7));
    if (d.distance > 1e-6) ++nontrivial;
    CHECK(oracle::min_vertex_edge(d.witness.values, mu, verts) >= d.distance - 1e-6);
  }
  CHECK(nontrivial > 10);
}

TEST_CASE("distance is zero iff the polytope is feasible at mu") {
  OutcomeWindow w = enumerate_window(History(), 1, binary);
  ModelPolytope m = halfline_polytope(w, 0.6);
  CHECK(polytope_feasible(m));
  FiniteMeasure inside(w, {0.35, 0.65});
  FiniteMeasure outside(w, {0.8, 0.2});
  CHECK(distance_to_model(inside, m, geo).distance <= 1e-6);
  CHECK(violation(inside, m) == doctest::Approx(0.0));
  CHECK(distance_to_model(outside, m, geo).distance > 1e-6);
  CHECK(violation(outside, m) == doctest::Approx(0.4));

  // Empty polytope: nu(1) >= 0.6 and nu(1) <= 0.3.
  ModelPolytope empty(w, {Constraint{{0.0, -1.0}, -0.6, false}, Constraint{{0.0, 1.0}, 0.3, false}});
  CHECK_FALSE(polytope_feasible(empty));
}

TEST_CASE("full simplex polytope") {
  OutcomeWindow w = enumerate_window(History(), 2, binary);
  ModelPolytope m = ModelPolytope::full_simplex(w);
  RandomStream rng(31, RandomStream::Role::kFuzz);
  FiniteMeasure mu(w, oracle::random_simplex_point(rng, w.size()));
  CHECK(violation(mu, m) == 0.0);
  CHECK(distance_to_model(mu, m, geo).distance == 0.0);
}
