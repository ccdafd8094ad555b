#include <doctest.h>

#include <cmath>

#include "aoisched/config.hpp"
#include "aoisched/oracle.hpp"
#include "aoisched/reference_policy.hpp"
#include "aoisched/validation.hpp"
#include "fixtures.hpp"

using namespace aoisched;

TEST_CASE("gauss-laguerre integrates monomials exactly") {
  const auto rule = gauss_laguerre(16);
  double fact = 1.0;
  for (int p = 0; p < 2 * 16; ++p) {
    if (p > 0) fact *= p;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], p);
    CHECK(s == doctest::Approx(fact).epsilon(1e-9));
  }
}

TEST_CASE("oracle refuses multi-sensor models") {
  CHECK_THROWS_AS(oracle_value_iteration(fixtures::k8()), std::invalid_argument);
}

TEST_CASE("myopic oracle equals the best stage cost") {
  Model m = validation::small_oracle_model();
  m.weights.gamma = 1e-9;
  const OracleResult r = oracle_value_iteration(m);
  // at gamma -> 0 the best action idles: the stage cost is the AoI part alone
  for (std::size_t c = 0; c < m.cell_count(); ++c)
    for (int q = 1; q <= 2; ++q)
      for (int ad = 1; ad <= 3; ++ad)
        CHECK(r.at(m, c, {q, 1, ad}) ==
              doctest::Approx(ad + (ad == m.weights.aMax ? m.weights.wQ : 0.0)).epsilon(1e-6));
}

TEST_CASE("oracle lower-bounds the reference value") {
  const Model m = validation::small_oracle_model();
  const OracleResult r = oracle_value_iteration(m);
  const ReferenceTables t = build_reference_tables(m, 1);
  for (std::size_t c = 0; c < m.cell_count(); ++c)
    for (int q = 0; q <= 2; ++q)
      for (int as = 1; as <= 3; ++as)
        for (int ad = 1; ad <= 3; ++ad) {
          const AbstractState z{c, {{q, as, ad}}};
          CHECK(r.at(m, c, z.sensors[0]) <= value_of_abstract_state(t, z) + 1e-6);
        }
}
