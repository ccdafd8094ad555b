#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "aoisched/experiments.hpp"
#include "aoisched/harness.hpp"
#include "aoisched/policy.hpp"
#include "fixtures.hpp"

using namespace aoisched;

TEST_CASE("episodes are reproducible and policies share randomness") {
  const auto& m = fixtures::k8();
  const auto bm2p = make_policy("bm2", m, nullptr);
  const auto bm3p = make_policy("bm3", m, nullptr);
  EpisodeOptions o;
  o.frames = 2000;
  o.seed = 42;
  o.start = cold_start(m, 0);
  std::vector<std::size_t> cellsA, cellsB;
  std::vector<std::vector<double>> gainsA, gainsB;
  o.observer = [&](const FrameRecord& f, const IterationTrace*) {
    cellsA.push_back(f.state.blockerCell);
    gainsA.push_back(f.state.gains);
  };
  const auto r1 = run_episode(m, *bm2p, o);
  o.observer = [&](const FrameRecord& f, const IterationTrace*) {
    cellsB.push_back(f.state.blockerCell);
    gainsB.push_back(f.state.gains);
  };
  run_episode(m, *bm3p, o);
  CHECK(cellsA == cellsB);
  CHECK(gainsA == gainsB);
  o.observer = nullptr;
  const auto r2 = run_episode(m, *bm2p, o);
  CHECK(r1.costs == r2.costs);
  CHECK(r1.totals.total() == r2.totals.total());
}

TEST_CASE("per-frame bookkeeping") {
  const auto& m = fixtures::k8();
  const auto p = make_policy("proposed", m, &fixtures::k8_tables());
  EpisodeOptions o;
  o.frames = 300;
  o.seed = 7;
  o.start = cold_start(m, 3);
  double discounted = 0.0, g = 1.0;
  long n = 0;
  o.observer = [&](const FrameRecord& f, const IterationTrace*) {
    CHECK(f.frame == n++);
    CHECK(f.cost.total() == doctest::Approx(per_frame_cost(f.state, f.action, m.weights)));
    CHECK_NOTHROW(check_action(f.action, m.weights, m.channel.maxPowerW));
    discounted += g * f.cost.total();
    g *= m.weights.gamma;
  };
  const auto r = run_episode(m, *p, o);
  CHECK(r.frames == 300);
  CHECK(r.discounted == doctest::Approx(discounted).epsilon(1e-12));
  double sum = 0.0;
  for (double c : r.costs) sum += c;
  CHECK(sum == doctest::Approx(r.totals.total()).epsilon(1e-12));
}

TEST_CASE("fully blocked room: server AoI climbs to the cap") {
  Config c = default_config(3);
  c.blocker.radius = 50.0;
  const Model m = build_model(c);
  const auto p = make_policy("bm1", m, nullptr);
  EpisodeOptions o;
  o.frames = 40;
  o.start = cold_start(m, 0);
  o.observer = [&](const FrameRecord& f, const IterationTrace*) {
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(f.state.gains[k] == 0.0);
      CHECK(f.departed[k] == 0);
      CHECK(f.state.sensors[k].aoiServer == std::min<long>(1 + f.frame, m.weights.aMax));
    }
  };
  run_episode(m, *p, o);
}

TEST_CASE("monte carlo summary") {
  const auto s = summarize({1.0, 2.0, 3.0, 4.0});
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.stdError == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(s.halfWidth == doctest::Approx(1.96 * s.stdError).epsilon(1e-3));
  CHECK(s.lower() < s.mean);
}

TEST_CASE("empirical transitions stay inside the model support") {
  const auto& m = fixtures::k8();
  const auto& t = fixtures::k8_tables();
  const TransitionCounts counts = empirical_transitions(m, 3000, 5);
  for (std::size_t k = 0; k < m.sensor_count(); ++k) {
    const SparseMatrix emp = counts.row_normalized(k, t.sensors[k].dimension());
    for (Eigen::Index r = 0; r < emp.outerSize(); ++r) {
      double rowSum = 0.0;
      for (SparseMatrix::InnerIterator it(emp, r); it; ++it) {
        rowSum += it.value();
        CHECK(t.sensors[k].P.coeff(r, it.col()) > 0.0);
      }
      if (counts.visits(k, static_cast<std::size_t>(r)) > 0) CHECK(rowSum == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("empirical cdf") {
  const auto c = empirical_cdf({3.0, 1.0, 2.0, 2.0}, {0.0, 1.0, 2.0, 10.0});
  CHECK(c == std::vector<double>{0.0, 0.25, 0.75, 1.0});
  CHECK(empirical_cdf({}, {1.0}) == std::vector<double>{0.0});
}

TEST_CASE("comparison keeps requested order and seed means") {
  const auto& m = fixtures::k8();
  ComparisonOptions o;
  o.policies = {"bm3", "bm1"};
  o.seeds = {1, 2};
  o.frames = 500;
  const auto out = compare_policies(m, nullptr, o);
  REQUIRE(out.size() == 2);
  CHECK(out[0].name == "bm3");
  CHECK(out[1].frames == 1000);
  CHECK(out[1].seedMeans.size() == 2);
  CHECK(out[1].meanCost == doctest::Approx((out[1].seedMeans[0] + out[1].seedMeans[1]) / 2));
  CHECK(out[0].cdf.back() == doctest::Approx(1.0).epsilon(0.05));
}
