#include <doctest.h>

#include <cmath>
#include <vector>

#include "fuzz.hpp"
#include "krc/cost.hpp"
#include "krc/errors.hpp"
#include "krc/measures.hpp"

using namespace krc;

TEST_CASE("finite space validates labels") {
  CHECK_THROWS_AS(FiniteSpace({}), InputError);
  CHECK_THROWS_AS(FiniteSpace({"a", "a"}), InputError);
  const auto s = make_space({"x", "y", "z"});
  CHECK(s->size() == 3);
  CHECK(s->index_of("y") == 1);
  CHECK_FALSE(s->index_of("w").has_value());
  CHECK(same_space(s, make_space({"x", "y", "z"})));
  CHECK_FALSE(same_space(s, make_space({"x", "y"})));
}

TEST_CASE("validate_prob accepts probabilities verbatim") {
  const auto s = make_space(2);
  const ProbVec half = validate_prob({0.5, 0.5}, s);
  CHECK(half[0] == 0.5);
  const ProbVec skew = validate_prob({0.7, 0.3}, s);
  CHECK(skew[1] == 0.3);
}

TEST_CASE("validate_prob rejects bad input") {
  const auto s = make_space(2);
  CHECK_THROWS_AS(validate_prob({0.7, 0.2}, s), NotNormalized);
  CHECK_THROWS_AS(validate_prob({1.1, -0.1}, s), NegativeMass);
  CHECK_THROWS_AS(validate_prob({1.0}, s), ShapeMismatch);
  // Rounding noise just below zero is clamped, not rejected.
  const ProbVec noisy = validate_prob({1.0 + 1e-16, -1e-16}, s);
  CHECK(noisy[1] == 0.0);
}

TEST_CASE("hahn decomposition on the frozen instances") {
  const auto s = make_space(2);
  const ProbVec mu = validate_prob({0.7, 0.3}, s);
  const ProbVec nu = validate_prob({0.4, 0.6}, s);
  const auto d = hahn_decompose(mu, nu);
  CHECK(std::abs(d.pi_plus[0] - 0.3) <= 1e-15);
  CHECK(d.pi_plus[1] == 0.0);
  CHECK(d.pi_minus[0] == 0.0);
  CHECK(std::abs(d.pi_minus[1] - 0.3) <= 1e-15);
  CHECK(std::abs(d.total_plus - 0.3) <= 1e-15);

  const auto zero = hahn_decompose(mu, mu);
  CHECK(zero.total_plus == 0.0);

  const auto disjoint =
      hahn_decompose(dirac(s, 0), dirac(s, 1));
  CHECK(disjoint.pi_plus == std::vector<double>{1.0, 0.0});
  CHECK(disjoint.pi_minus == std::vector<double>{0.0, 1.0});
  CHECK(disjoint.total_plus == 1.0);
}

TEST_CASE("hahn decomposition is exact and disjoint on random pairs") {
  auto rng = fuzz::make_rng(101);
  for (int round = 0; round < 50; ++round) {
    const auto s = make_space(2 + round % 9);
    const ProbVec mu = fuzz::random_prob(rng, s, true);
    const ProbVec nu = fuzz::random_prob(rng, s, true);
    const auto d = hahn_decompose(mu, nu);
    double sum_plus = 0.0, sum_minus = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      CHECK(d.pi_plus[i] * d.pi_minus[i] == 0.0);
      CHECK(d.pi_plus[i] - d.pi_minus[i] == mu[i] - nu[i]);  // exact
      sum_plus += d.pi_plus[i];
      sum_minus += d.pi_minus[i];
    }
    CHECK(std::abs(sum_plus - d.total_plus) == 0.0);
    CHECK(std::abs(sum_plus - sum_minus) <= 1e-12);
    CHECK(std::abs(variation_norm(mu, nu) - 2 * d.total_plus) <= 1e-12);
  }
}

TEST_CASE("variation norm") {
  const auto s = make_space(2);
  const ProbVec mu = validate_prob({0.7, 0.3}, s);
  const ProbVec nu = validate_prob({0.4, 0.6}, s);
  CHECK(std::abs(variation_norm(mu, nu) - 0.6) <= 1e-12);
  CHECK(variation_norm(mu, mu) == 0.0);
  CHECK(variation_norm(dirac(s, 0), dirac(s, 1)) == 2.0);
  CHECK_THROWS_AS(variation_norm(mu, validate_prob({1.0}, make_space(1))),
                  SpaceMismatch);
}

TEST_CASE("path closure fixes the triangle-violating instance") {
  const auto s = make_space(3);
  const CostMatrix c(s, {0, 1, 5,
                         1, 0, 1,
                         5, 1, 0});
  CHECK_FALSE(c.tight());
  const CostMatrix closed = path_closure(c);
  CHECK(closed(0, 2) == 2.0);
  CHECK(closed(0, 1) == 1.0);
  CHECK(closed.tight());

  const auto report = check_cost_tight(c);
  CHECK_FALSE(report.tight);
  CHECK(report.gap == 3.0);
  CHECK(((report.worst_i == 0 && report.worst_j == 2) ||
         (report.worst_i == 2 && report.worst_j == 0)));
}

TEST_CASE("metrics are fixed points of the closure") {
  const auto s4 = make_space(4);
  const CostMatrix disc = CostMatrix::discrete(s4);
  CHECK(disc.tight());
  CHECK(path_closure(disc).entries()[1] == 1.0);
  CHECK(check_cost_tight(disc).tight);

  const auto grid = make_space({"0", "0.5", "1"});
  const CostMatrix line = CostMatrix::line(grid, {0.0, 0.5, 1.0});
  CHECK(line.tight());
  CHECK(check_cost_tight(line).tight);
}

TEST_CASE("closure is idempotent, dominated, and certified tight") {
  auto rng = fuzz::make_rng(202);
  for (int round = 0; round < 30; ++round) {
    const auto s = make_space(2 + round % 12);
    std::uniform_real_distribution<double> weight(0.05, 3.0);
    const std::size_t n = s->size();
    std::vector<double> raw(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        raw[i * n + j] = raw[j * n + i] = weight(rng);
      }
    }
    const CostMatrix c(s, raw);
    const CostMatrix closed = path_closure(c);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(closed(i, j) <= c(i, j));
        for (std::size_t k = 0; k < n; ++k) {
          CHECK(closed(i, j) <= closed(i, k) + closed(k, j) + 1e-12);
        }
      }
    }
    CHECK(check_cost_tight(closed).tight);
    const CostMatrix twice = path_closure(closed);
    for (std::size_t k = 0; k < n * n; ++k) {
      CHECK(std::abs(twice.entries()[k] - closed.entries()[k]) <= 1e-12);
    }
  }
}

TEST_CASE("lipschitz check") {
  const auto s = make_space(2);
  const CostMatrix disc = CostMatrix::discrete(s);
  CHECK(lipschitz_check(std::vector<double>{1.0, 0.0}, disc));
  CHECK_FALSE(lipschitz_check(std::vector<double>{2.0, 0.0}, disc));
  CHECK(lipschitz_check(std::vector<double>{3.0, 3.0}, disc));
  CHECK_THROWS_AS(lipschitz_check(std::vector<double>{1.0}, disc),
                  ShapeMismatch);
}

TEST_CASE("the Lipschitz class is unchanged by closure") {
  auto rng = fuzz::make_rng(303);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  for (int round = 0; round < 40; ++round) {
    const auto s = make_space(2 + round % 8);
    const std::size_t n = s->size();
    std::uniform_real_distribution<double> weight(0.05, 3.0);
    std::vector<double> raw(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        raw[i * n + j] = raw[j * n + i] = weight(rng);
      }
    }
    const CostMatrix c(s, raw);
    const CostMatrix closed = path_closure(c);

    // A genuine member (McShane envelope w.r.t. the closed cost)...
    std::vector<double> g(n);
    for (double& v : g) v = val(rng);
    std::vector<double> f(n);
    for (std::size_t i = 0; i < n; ++i) {
      double best = g[0] + closed(i, 0);
      for (std::size_t j = 1; j < n; ++j) {
        best = std::min(best, g[j] + closed(i, j));
      }
      f[i] = best;
    }
    CHECK(lipschitz_check(f, c));
    CHECK(lipschitz_check(f, closed));

    // ...and a scaled-up non-member: equivalence must agree on both costs.
    std::vector<double> big = f;
    for (double& v : big) v *= 50.0;
    CHECK(lipschitz_check(big, c) == lipschitz_check(big, closed));
  }
}

TEST_CASE("dual potential construction enforces membership") {
  const auto s = make_space(2);
  const CostMatrix disc = CostMatrix::discrete(s);
  CHECK_NOTHROW(DualPotential(s, {1.0, 0.0}, disc));
  CHECK_THROWS_AS(DualPotential(s, {5.0, 0.0}, disc), InputError);
}
