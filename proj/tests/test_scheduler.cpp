#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "aoisched/policy.hpp"
#include "aoisched/scheduler.hpp"
#include "aoisched/validation.hpp"
#include "fixtures.hpp"

using namespace aoisched;

namespace {

SystemState draw_state(const Model& m, RandomStream& rng) {
  const AbstractState z = validation::random_abstract_state(m, rng);
  SystemState s{z.blockerCell, {}, z.sensors};
  for (std::size_t k = 0; k < m.sensor_count(); ++k) {
    const auto rate = m.links.rate(k, z.blockerCell);
    s.gains.push_back(rate ? rng.exponential() / *rate : 0.0);
  }
  return s;
}

}  // namespace

TEST_CASE("power for a packet count") {
  ChannelParams p;
  CHECK(power_from(0, 0.01, 1000.0, p) == 0.0);
  CHECK(power_from(3, 2.5e-3, 1000.0, p) == doctest::Approx((std::exp2(4.8) - 1.0) / 1000.0));
  CHECK(power_from(3, 2.5e-3, 1000.0, p) == doctest::Approx(0.02686).epsilon(1e-3));
  for (int d = 1; d <= 5; ++d)
    for (double tau : {1e-3, 4e-3, 1e-2}) {
      const double pw = power_from(d, tau, 750.0, p);
      CHECK(capacity(pw, 750.0, p) * tau == doctest::Approx(d * p.packetBits).epsilon(1e-12));
      CHECK(departures(tau, pw, 750.0, p) == d);
    }
  CHECK(min_transmit_time(2, 0.0, p) == std::numeric_limits<double>::infinity());
  CHECK(min_transmit_time(0, 0.0, p) == 0.0);
}

TEST_CASE("time split symmetry") {
  ChannelParams p;
  const auto r = solve_p23({2, 2, 2, 2}, {5000.0, 5000.0, 5000.0, 5000.0}, p, 0.01);
  REQUIRE(r.feasible);
  for (double t : r.tau) CHECK(t == doctest::Approx(0.0025));
  const auto one = solve_p23({0, 3, 0}, {10.0, 4000.0, 10.0}, p, 0.01);
  REQUIRE(one.feasible);
  CHECK(one.tau[1] == doctest::Approx(0.01));
  CHECK(one.tau[0] == 0.0);
  CHECK(one.tau[2] == 0.0);
  const auto none = solve_p23({0, 0}, {10.0, 10.0}, p, 0.01);
  CHECK(none.feasible);
  CHECK(none.tau == std::vector<double>{0.0, 0.0});
}

TEST_CASE("time split infeasibility and repair") {
  ChannelParams p;
  const std::vector<double> Y{5.0, 5.0};
  const auto r = solve_p23({5, 5}, Y, p, 0.01);
  CHECK(!r.feasible);
  const auto fixed = repair_packets({5, 5}, Y, p, 0.01);
  double need = 0.0;
  for (std::size_t k = 0; k < 2; ++k) need += min_transmit_time(fixed[k], Y[k], p);
  CHECK(need <= 0.01);
  CHECK(solve_p23(fixed, Y, p, 0.01).feasible);
}

TEST_CASE("time split matches the bisection oracle") {
  const auto& m = fixtures::k8();
  const auto rep = validation::time_split_suite(m.channel, m.weights.frameSec, {200, 8, 77});
  for (const auto& line : rep.lines) INFO(line);
  CHECK(rep.passed);
}

TEST_CASE("sampling decision against explicit two-branch evaluation") {
  const Model tiny = build_model(fixtures::tiny_config());
  const ReferenceTables t = build_reference_tables(tiny, 1);
  const Scheduler sch(tiny, t);
  const auto& w = tiny.weights;
  int checked = 0;
  for (std::size_t cell = 0; cell < 2; ++cell)
    for (int as = 1; as <= 3; ++as)
      for (int ad = 1; ad <= 3; ++ad)
        for (double Y : {0.0, 50.0, 900.0, 1e5}) {
          const SystemState s{cell, {Y}, {{0, as, ad}}};
          double obj[2];
          for (int smp = 0; smp <= 1; ++smp) {
            const int d = std::min(departures(0.01, 0.05, Y, tiny.channel), smp ? 2 : 0);
            const LocalState n = advance_local({0, as, ad}, smp, d, 2, 3, w.drainRule);
            double v = 0.0;
            for (std::size_t to = 0; to < 2; ++to) v += tiny.blocker.probability(cell, to) * t.local_value(0, to, n);
            obj[smp] = w.wP * smp * w.sampleEnergyJ + w.gamma * v;
          }
          if (std::abs(obj[0] - obj[1]) < 1e-9) continue;
          CHECK(sch.solve_p21(s, 0, 0.01, 0.05) == (obj[1] < obj[0] ? 1 : 0));
          ++checked;
        }
  CHECK(checked > 0);
}

TEST_CASE("prohibitive sampling weight never samples") {
  const auto& base = fixtures::k8();
  Model costly = base;
  costly.weights.wP = 1e12;
  const Scheduler sch(costly, fixtures::k8_tables());
  RandomStream rng(3);
  for (int i = 0; i < 200; ++i) {
    const SystemState s = draw_state(costly, rng);
    for (std::size_t k = 0; k < s.sensors.size(); ++k) CHECK(sch.solve_p21(s, k, 0.001, 0.05) == 0);
  }
}

TEST_CASE("packet count decision") {
  const auto& m = fixtures::k8();
  const Scheduler sch(m, fixtures::k8_tables());
  SystemState s{0, std::vector<double>(8, 0.0), std::vector<LocalState>(8, LocalState{3, 4, 6})};
  CHECK(sch.solve_p22(s, 0, 0, 0.005) == 0);
  // with a huge gain power is free and draining minimizes the value
  s.gains.assign(8, 1e12);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(sch.solve_p22(s, k, 0, 0.005) == 3);
    CHECK(sch.solve_p22(s, k, 1, 0.005) == m.weights.dataVolume[k]);
  }
}

TEST_CASE("a larger power budget never hurts the packet choice") {
  const auto& m = fixtures::k8();
  Model rich = m;
  rich.channel.maxPowerW = 1.0;
  const Scheduler a(m, fixtures::k8_tables()), b(rich, fixtures::k8_tables());
  RandomStream rng(5);
  for (int i = 0; i < 300; ++i) {
    const SystemState s = draw_state(m, rng);
    for (std::size_t k = 0; k < 8; ++k) {
      const double tau = 0.00125;
      auto value = [&](const Scheduler& sch, const Model& mod) {
        const int d = sch.solve_p22(s, k, 0, tau);
        const double pw = power_from(d, tau, s.gains[k], mod.channel);
        return sch.sensor_objective(s, k, {0, tau, pw}, d);
      };
      CHECK(value(b, rich) <= value(a, m) + 1e-9);
    }
  }
}

TEST_CASE("iterations descend and respect the frame") {
  const auto& m = fixtures::k8();
  const Scheduler sch(m, fixtures::k8_tables());
  RandomStream rng(9);
  for (int i = 0; i < 300; ++i) {
    const SystemState s = draw_state(m, rng);
    const ScheduleResult r = sch.schedule(s);
    const auto& it = r.trace.iterations;
    for (std::size_t n = 1; n < it.size(); ++n) CHECK(it[n].objective <= it[n - 1].objective + 1e-9);
    CHECK_NOTHROW(check_action(r.action, m.weights, m.channel.maxPowerW));
    for (std::size_t k = 0; k < 8; ++k)
      CHECK(std::min(departures(r.action[k].tauSec, r.action[k].powerW, s.gains[k], m.channel),
                     transmit_buffer(s.sensors[k], r.action[k].sample, m.weights.dataVolume[k])) == r.packets[k]);
  }
}

TEST_CASE("fully blocked idle state transmits nothing") {
  Config c = default_config(4);
  c.blocker.radius = 50.0;
  const Model m = build_model(c);
  const ReferenceTables t = build_reference_tables(m, 1);
  const Scheduler sch(m, t);
  const SystemState s{0, std::vector<double>(4, 0.0), std::vector<LocalState>(4, LocalState{0, 1, 1})};
  const ScheduleResult r = sch.schedule(s);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(r.packets[k] == 0);
    CHECK(r.action[k].tauSec * r.action[k].powerW == 0.0);
  }
}

TEST_CASE("iteration-limited policies") {
  const auto& m = fixtures::k8();
  const auto psi2 = make_policy("psi2", m, &fixtures::k8_tables());
  RandomStream rng(12);
  for (int i = 0; i < 100; ++i) {
    IterationTrace tr;
    psi2->act(draw_state(m, rng), &tr);
    CHECK(tr.iteration_count() <= 2);
  }
  CHECK_THROWS(make_policy("psiX", m, &fixtures::k8_tables()));
  CHECK_THROWS(make_policy("proposed", m, nullptr));
  CHECK_THROWS(make_policy("bm4", m, nullptr));
}
