#include <doctest.h>

#include "credal/measure.hpp"
#include "credal/rng.hpp"
#include "oracles.hpp"

using namespace credal;

namespace {
AlphabetSchedule binary{{2}, 4};
}

TEST_CASE("conditioning restricts and renormalizes") {
  OutcomeWindow w = enumerate_window(History(), 2, binary);

  SUBCASE("uniform stays uniform") {
    FiniteMeasure mu = FiniteMeasure::uniform(w);
    FiniteMeasure c = mu.conditioned(History({0}, binary));
    CHECK(c.size() == 2);
    CHECK(c[0] == doctest::Approx(0.5));
    CHECK(c[1] == doctest::Approx(0.5));
    CHECK(c.window().base().symbols() == std::vector<int>{0});
  }

  SUBCASE("point mass is preserved") {
    FiniteMeasure mu = FiniteMeasure::dirac(w, w.index_of(std::vector<int>{1, 0}));
    FiniteMeasure c = mu.conditioned(History({1}, binary));
    CHECK(c[0] == doctest::Approx(1.0));
    CHECK(c[1] == doctest::Approx(0.0));
  }

  SUBCASE("direct Bayes arithmetic") {
    FiniteMeasure mu(w, {0.5, 0.25, 0.25, 0.0});
    FiniteMeasure c = mu.conditioned(History({0}, binary));
    CHECK(c[0] == doctest::Approx(2.0 / 3.0));
    CHECK(c[1] == doctest::Approx(1.0 / 3.0));
  }

  SUBCASE("zero-mass cylinder is an explicit error") {
    FiniteMeasure mu(w, {0.5, 0.5, 0.0, 0.0});
    CHECK_THROWS_AS(mu.conditioned(History({1}, binary)), ConditioningError);
  }
}

TEST_CASE("conditioning then marginalizing recovers conditional masses") {
  AlphabetSchedule mixed({2, 3}, 2);
  OutcomeWindow w = enumerate_window(History(), 2, mixed);
  RandomStream rng(7, RandomStream::Role::kFuzz);
  for (int trial = 0; trial < 20; ++trial) {
    FiniteMeasure mu(w, oracle::random_simplex_point(rng, w.size()));
    for (int first = 0; first < 2; ++first) {
      double mass = mu.prefix_mass(first, 1);
      FiniteMeasure c = mu.conditioned(History({first}, mixed));
      for (int o = 0; o < 3; ++o)
        CHECK(c[o] * mass == doctest::Approx(mu[first * 3 + o]).epsilon(1e-9));
    }
  }
}

TEST_CASE("semidirect products") {
  OutcomeWindow w1 = enumerate_window(History(), 1, binary);

  SUBCASE("copy kernel doubles the diagonal") {
    FiniteMeasure mu = FiniteMeasure::uniform(w1);
    FiniteMeasure out = semidirect(mu, Kernel::copy_previous(binary));
    CHECK(out.size() == 4);
    CHECK(out[0] == doctest::Approx(0.5));  // 00
    CHECK(out[3] == doctest::Approx(0.5));  // 11
    CHECK(out[1] == doctest::Approx(0.0));
    CHECK(out[2] == doctest::Approx(0.0));
  }

  SUBCASE("uniform kernel gives product of marginals") {
    FiniteMeasure mu(w1, {0.3, 0.7});
    FiniteMeasure out = semidirect(mu, Kernel::uniform(binary));
    CHECK(out[0] == doctest::Approx(0.15));
    CHECK(out[1] == doctest::Approx(0.15));
    CHECK(out[2] == doctest::Approx(0.35));
    CHECK(out[3] == doctest::Approx(0.35));
  }

  SUBCASE("dirac prefix with deterministic kernel stays a point mass") {
    FiniteMeasure mu = FiniteMeasure::dirac(w1, 1);
    FiniteMeasure out = semidirect(mu, Kernel::copy_previous(binary));
    CHECK(out[3] == doctest::Approx(1.0));
  }

  SUBCASE("mass is preserved") {
    RandomStream rng(3, RandomStream::Role::kFuzz);
    FiniteMeasure mu(w1, oracle::random_simplex_point(rng, 2));
    FiniteMeasure out = semidirect(mu, Kernel::noisy_copy(binary, 0.8));
    CHECK(out.mass_error() <= 1e-9);
  }
}

TEST_CASE("expectation is the dot product") {
  OutcomeWindow w = enumerate_window(History(), 1, binary);
  FiniteMeasure mu = FiniteMeasure::uniform(w);
  std::vector<double> f{0.0, 1.0};
  CHECK(expectation(mu, f) == doctest::Approx(0.5));
  std::vector<double> c{3.25, 3.25};
  CHECK(expectation(mu, c) == doctest::Approx(3.25));
  FiniteMeasure d = FiniteMeasure::dirac(w, 1);
  CHECK(expectation(d, f) == doctest::Approx(1.0));
  std::vector<double> wrong{1.0, 2.0, 3.0};
  CHECK_THROWS_AS(expectation(mu, wrong), DomainError);
}

TEST_CASE("malformed kernels are rejected") {
  OutcomeWindow w = enumerate_window(History(), 1, binary);
  FiniteMeasure mu = FiniteMeasure::uniform(w);
  Kernel bad([](const History&) { return std::vector<double>{0.5, 0.6}; }, "bad");
  CHECK_THROWS_AS(semidirect(mu, bad), DomainError);
  Kernel negative([](const History&) { return std::vector<double>{1.2, -0.2}; }, "neg");
  CHECK_THROWS_AS(semidirect(mu, negative), DomainError);
}

TEST_CASE("measure validation") {
  OutcomeWindow w = enumerate_window(History(), 1, binary);
  CHECK_THROWS_AS(FiniteMeasure(w, {0.5, 0.2}), DomainError);
  CHECK_THROWS_AS(FiniteMeasure(w, {1.5, -0.5}), DomainError);
  CHECK_THROWS_AS(FiniteMeasure(w, {0.5, 0.5, 0.0}), DomainError);
}
