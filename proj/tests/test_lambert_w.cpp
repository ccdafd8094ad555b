#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/lambert_w.hpp>

#include "aoisched/lambert_w.hpp"

using aoisched::lambert_w0;

TEST_CASE("lambert w anchors") {
  CHECK(lambert_w0(0.0) == 0.0);
  CHECK(lambert_w0(std::numbers::e) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lambert_w0(-std::exp(-1.0)) == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("lambert w rejects the domain outside the principal branch") {
  CHECK_THROWS_AS(lambert_w0(-0.5), std::domain_error);
  CHECK_THROWS_AS(lambert_w0(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST_CASE("lambert w agrees with boost") {
  for (int i = 0; i <= 4000; ++i) {
    const double x = std::pow(10.0, -10.0 + 16.0 * i / 4000.0);
    CHECK(lambert_w0(x) == doctest::Approx(boost::math::lambert_w0(x)).epsilon(1e-13));
  }
  for (int i = 1; i < 2000; ++i) {
    const double x = -std::exp(-1.0) * i / 2000.0;
    CHECK(lambert_w0(x) == doctest::Approx(boost::math::lambert_w0(x)).epsilon(1e-12));
  }
}

TEST_CASE("lambert w inverts w e^w") {
  for (double w = -1.0; w <= 12.0; w += 0.013) {
    const double x = w * std::exp(w);
    CHECK(lambert_w0(x) == doctest::Approx(w).epsilon(w > -0.99 ? 1e-12 : 1e-7));
  }
}
