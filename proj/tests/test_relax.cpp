#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oed/relax.hpp"
#include "test_helpers.hpp"

using namespace oed;
using test::random_matrix;
using test::rel_error;

TEST_CASE("mirror_step closed forms") {
  SUBCASE("constant gradient is a no-op") {
    Vector om(2), g(2);
    om << 0.5, 0.5;
    g << std::log(2.0), std::log(2.0);
    const Vector next = mirror_step(om, g, 1.0);
    CHECK(next(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(next(1) == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("asymmetric gradient") {
    Vector om(2), g(2);
    om << 0.5, 0.5;
    g << 0.0, std::log(2.0);
    const Vector next = mirror_step(om, g, 1.0);
    CHECK(next(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
    CHECK(next(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  }
  SUBCASE("matches the direct softmax formula") {
    Vector om = Vector::Constant(4, 0.25);
    Vector g(4);
    g << 1, 2, 3, 4;
    const double gamma = 0.1;
    const Vector next = mirror_step(om, g, gamma);
    double z = 0.0;
    for (int i = 0; i < 4; ++i) z += 0.25 * std::exp(-gamma * g(i));
    for (int i = 0; i < 4; ++i)
      CHECK(rel_error(next(i), 0.25 * std::exp(-gamma * g(i)) / z) <= 1e-14);
  }
  SUBCASE("stays on the simplex") {
    CounterRng rng(RngSeed{31});
    Vector om(6);
    for (int i = 0; i < 6; ++i) om(i) = rng.next_double() + 0.01;
    om /= om.sum();
    for (int rep = 0; rep < 50; ++rep) {
      Vector g(6);
      for (int i = 0; i < 6; ++i) g(i) = 100.0 * (rng.next_double() - 0.5);
      om = mirror_step(om, g, 0.3);
      CHECK(std::abs(om.sum() - 1.0) <= 1e-12);
      CHECK(om.minCoeff() >= 0.0);
    }
  }
  SUBCASE("zero mass is an error") {
    Vector om = Vector::Zero(3);
    CHECK_THROWS_AS(mirror_step(om, Vector::Ones(3), 1.0), StateError);
  }
}

TEST_CASE("solve_relaxed on the identity pool is uniform") {
  const Index d = 4;
  const DesignPool pool(Matrix::Identity(d, d));
  MirrorDescentConfig cfg;
  cfg.budget_k = d;
  const auto sol = solve_relaxed(pool, Criterion(CriterionKind::A), cfg);
  CHECK(sol.converged);
  for (Index i = 0; i < d; ++i)
    CHECK(sol.omega(i) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(sol.objective_value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(sol.pi.sum() - 4.0) <= 1e-8 * 4.0);
}

TEST_CASE("solve_relaxed beats a simplex grid oracle on a tiny pool") {
  CounterRng rng(RngSeed{33});
  const DesignPool pool(random_matrix(4, 2, rng));
  const Criterion c(CriterionKind::A);
  const long k = 3;
  MirrorDescentConfig cfg;
  cfg.budget_k = k;
  cfg.rel_tol = 1e-10;
  cfg.max_iters = 60000;
  const auto sol = solve_relaxed(pool, c, cfg);

  // grid over omega = (a, b, c, 1-a-b-c) at resolution 1/50
  double best = std::numeric_limits<double>::infinity();
  const int r = 50;
  for (int a = 0; a <= r; ++a)
    for (int b = 0; a + b <= r; ++b)
      for (int cc = 0; a + b + cc <= r; ++cc) {
        Vector w(4);
        w << a, b, cc, r - a - b - cc;
        w *= static_cast<double>(k) / r;
        try {
          best = std::min(
              best, criterion_value_and_gradient(c, pool, w, 0.0).value);
        } catch (const SingularMatrixError&) {
        }
      }
  CHECK(sol.objective_value <= best + 1e-4);
}

TEST_CASE("solve_relaxed descends from the uniform start") {
  CounterRng rng(RngSeed{34});
  const DesignPool pool(random_matrix(30, 4, rng));
  for (CriterionKind kind : {CriterionKind::A, CriterionKind::D,
                             CriterionKind::E, CriterionKind::V}) {
    const Criterion c = kind == CriterionKind::V ? Criterion(kind, pool)
                                                 : Criterion(kind);
    MirrorDescentConfig cfg;
    cfg.budget_k = 8;
    const auto sol = solve_relaxed(pool, c, cfg);
    CHECK(sol.objective_value <= sol.trace.front() + 1e-12);
    CHECK(std::abs(sol.pi.sum() - 8.0) <= 8e-8);
    CHECK(sol.pi.minCoeff() >= 0.0);
  }
}

TEST_CASE("trace is non-increasing after the first 10 iterations") {
  CounterRng rng(RngSeed{35});
  const DesignPool pool(random_matrix(25, 3, rng));
  MirrorDescentConfig cfg;
  cfg.budget_k = 6;
  cfg.rel_tol = 1e-9;
  const auto sol = solve_relaxed(pool, Criterion(CriterionKind::A), cfg);
  for (std::size_t t = 10; t + 1 < sol.trace.size(); ++t)
    CHECK(sol.trace[t + 1] <= sol.trace[t] + 1e-9);
}

TEST_CASE("relaxed optimum lower-bounds every integer selection (tiny oracle)") {
  CounterRng rng(RngSeed{36});
  const DesignPool pool(random_matrix(7, 2, rng));
  const Criterion c(CriterionKind::A);
  const long k = 3;
  MirrorDescentConfig cfg;
  cfg.budget_k = k;
  cfg.rel_tol = 1e-10;
  cfg.max_iters = 60000;
  const auto sol = solve_relaxed(pool, c, cfg);
  // enumerate all C(7,3) subsets
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j)
      for (int l = j + 1; l < 7; ++l) {
        Vector w = Vector::Zero(7);
        w(i) = w(j) = w(l) = 1.0;
        try {
          const double f =
              criterion_value_and_gradient(c, pool, w, 0.0).value;
          CHECK(sol.objective_value <= f + 1e-7);
        } catch (const SingularMatrixError&) {
        }
      }
}

TEST_CASE("rank-deficient pool without ridge raises, with ridge succeeds") {
  Matrix x(3, 2);
  x << 1, 0, 2, 0, 3, 0;  // rank 1
  const DesignPool pool(x);
  MirrorDescentConfig cfg;
  cfg.budget_k = 2;
  CHECK_THROWS_AS(solve_relaxed(pool, Criterion(CriterionKind::A), cfg),
                  SingularMatrixError);
  cfg.ridge_lambda = 0.1;
  const auto sol = solve_relaxed(pool, Criterion(CriterionKind::A), cfg);
  CHECK(std::isfinite(sol.objective_value));
}

TEST_CASE("fixed step rule works") {
  CounterRng rng(RngSeed{37});
  const DesignPool pool(random_matrix(10, 2, rng));
  MirrorDescentConfig cfg;
  cfg.budget_k = 4;
  cfg.step_rule = StepRule::Fixed;
  cfg.step_param = 0.05;
  const auto sol = solve_relaxed(pool, Criterion(CriterionKind::A), cfg);
  CHECK(sol.objective_value <= sol.trace.front());
}

TEST_CASE("config validation") {
  MirrorDescentConfig cfg;
  cfg.budget_k = 0;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg.budget_k = 2;
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
  cfg.rel_tol = 1e-5;
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), ArgumentError);
}

TEST_CASE("solve_relaxed is deterministic") {
  CounterRng rng(RngSeed{38});
  const DesignPool pool(random_matrix(20, 3, rng));
  MirrorDescentConfig cfg;
  cfg.budget_k = 5;
  const auto a = solve_relaxed(pool, Criterion(CriterionKind::A), cfg);
  const auto b = solve_relaxed(pool, Criterion(CriterionKind::A), cfg);
  CHECK(a.pi == b.pi);
  CHECK(a.objective_value == b.objective_value);
}
