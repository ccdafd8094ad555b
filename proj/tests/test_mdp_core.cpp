#include <doctest.h>

#include <stdexcept>

#include "aoisched/mdp_core.hpp"
#include "aoisched/mobility.hpp"

using namespace aoisched;

namespace {

CostWeights table_weights(std::vector<int> L) {
  CostWeights w;
  w.dataVolume = std::move(L);
  return w;
}

}  // namespace

TEST_CASE("per-frame cost") {
  const CostWeights w = table_weights({5});
  CHECK(cost_breakdown({{0, 1, 1}}, {{0, 0.0, 0.0}}, w).total() == 1.0);
  const CostBreakdown c = cost_breakdown({{2, 4, 10}}, {{0, 0.01, 0.05}}, w);
  CHECK(c.total() == doctest::Approx(115.0));
  CHECK(c.serverAoi == 10.0);
  CHECK(c.transmissionEnergy == doctest::Approx(5.0));
  CHECK(c.outdatedPenalty == 100.0);
  CHECK(cost_breakdown({{2, 4, 10}}, {{1, 0.01, 0.05}}, w).total() == doctest::Approx(116.0));
  CHECK_THROWS(cost_breakdown({{0, 1, 1}}, {}, w));
}

TEST_CASE("local recursions") {
  const LocalState a = advance_local({3, 2, 5}, 0, 1, 5, 10);
  CHECK(a == LocalState{2, 3, 6});
  const LocalState b = advance_local({2, 4, 7}, 0, 2, 5, 10);
  CHECK(b.queue == 0);
  CHECK(b.aoiSensor == 5);
  CHECK(b.aoiServer == 5);
  const LocalState c = advance_local({0, 7, 9}, 1, 5, 5, 10);
  CHECK(c == LocalState{0, 1, 1});
  // departures beyond the buffer are capped
  CHECK(advance_local({1, 3, 3}, 0, 9, 5, 10) == LocalState{0, 4, 4});
  // AoIs saturate at the cap
  CHECK(advance_local({2, 10, 10}, 0, 0, 5, 10) == LocalState{2, 10, 10});
  CHECK_THROWS(advance_local({1, 1, 1}, 0, -1, 5, 10));
}

TEST_CASE("drain rule on sampling frames") {
  const LocalState s{0, 4, 6};
  CHECK(advance_local(s, 1, 3, 3, 10, DrainRule::PostAction) == LocalState{0, 1, 1});
  CHECK(advance_local(s, 1, 3, 3, 10, DrainRule::SkipOnSampling) == LocalState{0, 1, 7});
  // without sampling the two rules agree
  CHECK(advance_local({2, 4, 6}, 0, 2, 3, 10, DrainRule::SkipOnSampling) == LocalState{0, 5, 5});
}

TEST_CASE("kappa indexing") {
  CHECK(kappa_index(0, {0, 1, 1}, 5, 10) == 1);
  CHECK(kappa_index(0, {5, 10, 10}, 5, 10) == 600);
  CHECK(epsilon_index({1, 1, 1}, 5, 10) == 101);
  CHECK_THROWS_AS(epsilon_index({6, 1, 1}, 5, 10), std::out_of_range);
  CHECK_THROWS_AS(epsilon_index({0, 0, 1}, 5, 10), std::out_of_range);

  std::size_t expected = 1;
  for (std::size_t cell = 0; cell < 24; ++cell)
    for (int q = 0; q <= 5; ++q)
      for (int as = 1; as <= 10; ++as)
        for (int ad = 1; ad <= 10; ++ad) {
          const LocalState l{q, as, ad};
          const std::size_t kappa = kappa_index(cell, l, 5, 10);
          CHECK(kappa == expected++);
          const KappaTuple t = inverse_kappa(kappa, 5, 10);
          CHECK(t.cell == cell);
          CHECK(t.local == l);
        }
  CHECK(expected - 1 == 14400);
}

TEST_CASE("transition support follows the blocker row") {
  const BlockerModel stay = from_transition_matrix({{0.0, 0.0}, {1.0, 0.0}}, {1.0, 0.0, 0.0, 1.0}, 0.3);
  const CostWeights w = table_weights({5});
  const auto one = transition_support(0, {2, 3, 4}, 0, 1, 5, w, stay);
  REQUIRE(one.size() == 1);
  CHECK(one[0].probability == 1.0);
  CHECK(one[0].local == LocalState{1, 4, 5});

  const BlockerModel walk = build_random_walk({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}, 1.0, 0.9);
  const auto three = transition_support(1, {0, 1, 1}, 1, 5, 5, w, walk);
  REQUIRE(three.size() == 3);
  double s = 0.0;
  for (const auto& t : three) {
    s += t.probability;
    CHECK(t.local == LocalState{0, 1, 1});
    CHECK(t.probability == doctest::Approx(t.cell == 1 ? 0.9 : 0.05));
  }
  CHECK(std::abs(s - 1.0) <= 1e-12);
}

TEST_CASE("action limits") {
  const CostWeights w = table_weights({3, 3});
  CHECK_NOTHROW(check_action({{0, 0.005, 0.1}, {1, 0.005, 0.05}}, w, 0.1));
  CHECK_THROWS_AS(check_action({{0, 0.006, 0.1}, {1, 0.005, 0.05}}, w, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(check_action({{0, 0.005, 0.2}, {1, 0.005, 0.05}}, w, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(check_action({{2, 0.005, 0.1}, {1, 0.005, 0.05}}, w, 0.1), std::invalid_argument);
}

TEST_CASE("weights validation") {
  CostWeights w = table_weights({3});
  CHECK_NOTHROW(w.validate());
  w.gamma = 1.0;
  CHECK_THROWS(w.validate());
  w = table_weights({0});
  CHECK_THROWS(w.validate());
}
