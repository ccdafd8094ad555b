#pragma once

#include <cstddef>
#include <vector>

#include "aoisched/mdp_core.hpp"
#include "aoisched/model.hpp"

namespace aoisched {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Laguerre rule for integrals of e^{-x} f(x) over [0, inf),
/// from the eigen-decomposition of the Jacobi matrix.
QuadratureRule gauss_laguerre(int n);

struct OracleOptions {
  double tol = 1e-8;
  int tauGrid = 20;        // tau in {T_F j / tauGrid : j = 1..tauGrid}
  int quadratureNodes = 64;
  std::size_t maxWork = 20'000'000;  // states x nodes x actions
  int maxIterations = 100000;
};

struct OracleResult {
  std::vector<double> value;  // indexed by kappa - 1
  int iterations = 0;
  double lastChange = 0.0;

  double at(const Model& model, std::size_t cell, const LocalState& local) const {
    return value[kappa_index(cell, local, model.weights.dataVolume[0], model.weights.aMax) - 1];
  }
};

/// Value iteration on the abstract-state Bellman equation of a single-sensor
/// model, with the gain expectation by quadrature and actions (s, tau, d)
/// from a grid. Throws std::invalid_argument when the model has more than
/// one sensor or the work per sweep exceeds `maxWork`.
OracleResult oracle_value_iteration(const Model& model, const OracleOptions& options = {});

}  // namespace aoisched
