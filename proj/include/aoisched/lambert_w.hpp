#pragma once

namespace aoisched {

/// Principal branch W0 on [-1/e, inf). Throws std::domain_error below -1/e.
double lambert_w0(double x);

}  // namespace aoisched
