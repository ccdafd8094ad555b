#include <doctest.h>

#include <cmath>

#include "aoisched/geometry.hpp"
#include "aoisched/mobility.hpp"

using namespace aoisched;

TEST_CASE("random walk splits the residual between neighbours") {
  const BlockerModel m = build_random_walk({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}, 1.0, 0.9);
  CHECK(m.probability(1, 1) == doctest::Approx(0.9));
  CHECK(m.probability(1, 0) == doctest::Approx(0.05));
  CHECK(m.probability(1, 2) == doctest::Approx(0.05));
  CHECK(m.probability(0, 1) == doctest::Approx(0.1));
  CHECK(m.probability(0, 2) == 0.0);
}

TEST_CASE("isolated cell keeps the blocker") {
  const BlockerModel m = build_random_walk({{0.0, 0.0}, {5.0, 0.0}}, 1.0, 0.9);
  CHECK(m.probability(0, 0) == 1.0);
  CHECK(m.probability(0, 1) == 0.0);
  RandomStream rng(3);
  for (int i = 0; i < 100; ++i) CHECK(step(m, 0, rng) == 0);
}

TEST_CASE("rows are stochastic") {
  const BlockerModel m = build_random_walk(ring_cells({10.0, 10.0}, 3, 1.0), 1.0, 0.9);
  for (std::size_t i = 0; i < m.cell_count(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cell_count(); ++j) {
      CHECK(m.probability(i, j) >= 0.0);
      s += m.probability(i, j);
    }
    CHECK(std::abs(s - 1.0) <= 1e-12);
    CHECK(m.probability(i, i) == 0.9);
  }
}

TEST_CASE("stay probability one freezes the trajectory") {
  const BlockerModel m = build_random_walk(ring_cells({10.0, 10.0}, 3, 1.0), 1.0, 1.0);
  RandomStream rng(5);
  std::size_t c = 7;
  for (int i = 0; i < 1000; ++i) c = step(m, c, rng);
  CHECK(c == 7);
}

TEST_CASE("empirical next-cell frequencies match the row") {
  const BlockerModel m = build_random_walk(ring_cells({10.0, 10.0}, 3, 1.0), 1.0, 0.9);
  RandomStream rng(11);
  const int n = 1'000'000;
  std::vector<long> hits(m.cell_count(), 0);
  for (int i = 0; i < n; ++i) ++hits[step(m, 4, rng)];
  for (std::size_t j = 0; j < m.cell_count(); ++j) {
    const double p = m.probability(4, j);
    const double sd = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(static_cast<double>(hits[j]) / n - p) <= 4.0 * sd + 1e-12);
  }
}

TEST_CASE("explicit transition matrix") {
  const BlockerModel m = from_transition_matrix({{0.0, 0.0}, {1.0, 0.0}}, {0.0, 1.0, 0.25, 0.75}, 0.3);
  CHECK(step_with_uniform(m, 0, 0.999) == 1);
  CHECK(step_with_uniform(m, 1, 0.2) == 0);
  CHECK(step_with_uniform(m, 1, 0.3) == 1);
  CHECK_THROWS(from_transition_matrix({{0.0, 0.0}, {1.0, 0.0}}, {0.5, 0.4, 0.25, 0.75}, 0.3));
  CHECK_THROWS(build_random_walk({}, 1.0, 0.9));
}

TEST_CASE("n-step distribution") {
  const BlockerModel m = build_random_walk(ring_cells({10.0, 10.0}, 3, 1.0), 1.0, 0.9);
  const auto d0 = n_step_distribution(m, 3, 0);
  CHECK(d0[3] == 1.0);
  const auto d1 = n_step_distribution(m, 3, 1);
  for (std::size_t j = 0; j < m.cell_count(); ++j) CHECK(d1[j] == doctest::Approx(m.probability(3, j)));
  // a lazy walk on a cycle is aperiodic, so the distribution settles
  const auto a = n_step_distribution(m, 3, 4000), b = n_step_distribution(m, 3, 4001);
  double tv = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) tv += 0.5 * std::abs(a[j] - b[j]);
  CHECK(tv < 1e-6);
}
