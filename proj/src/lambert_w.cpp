#include "aoisched/lambert_w.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aoisched {

namespace {

double residual(double w, double x) { return std::abs(w * std::exp(w) - x); }

double initial_guess(double x) {
  constexpr double e = std::numbers::e;
  if (x < -0.3) {
    // Series about the branch point in p = sqrt(2 (e x + 1)).
    const double p = std::sqrt(std::max(0.0, 2.0 * (e * x + 1.0)));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
  }
  if (x < e) return std::log1p(x) * (1.0 - std::log1p(std::log1p(x)) / (2.0 + std::log1p(x)));
  const double l1 = std::log(x);
  const double l2 = std::log(l1);
  return l1 - l2 + l2 / l1;
}

}  // namespace

double lambert_w0(double x) {
  const double branch = -std::exp(-1.0);
  if (std::isnan(x)) throw std::domain_error("lambert_w0: NaN argument");
  if (x <= branch) {
    if (x >= branch * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) return -1.0;
    throw std::domain_error("lambert_w0: argument below -1/e");
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w = initial_guess(x);
  for (int it = 0; it < 64; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    const double next = std::max(w - step, -1.0);
    const bool done = std::abs(next - w) <= 1e-15 * (1.0 + std::abs(next));
    w = next;
    if (done) break;
  }
  // Settle the last ulp on the smaller residual.
  for (int i = 0; i < 4; ++i) {
    const double up = std::nextafter(w, INFINITY);
    const double down = std::nextafter(w, -INFINITY);
    const double r = residual(w, x);
    if (residual(up, x) < r)
      w = up;
    else if (down >= -1.0 && residual(down, x) < r)
      w = down;
    else
      break;
  }
  return w;
}

}  // namespace aoisched
