#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "aoisched/geometry.hpp"
#include "aoisched/random.hpp"

namespace aoisched {

/// Time-invariant Markov mobility of the single blocker over the cells.
struct BlockerModel {
  std::vector<Point> cells;
  double radius = 0.3;
  double stayProbability = 0.9;
  /// Row-major |L| x |L| transition matrix.
  std::vector<double> transition;
  /// Nonzero entries of each row, in increasing cell order.
  std::vector<std::vector<std::pair<std::size_t, double>>> successors;

  std::size_t cell_count() const { return cells.size(); }
  double probability(std::size_t from, std::size_t to) const {
    return transition[from * cells.size() + to];
  }
};

/// Random walk on the cells: stay with `stayProbability`, otherwise move to an
/// edge-adjacent cell (center distance <= cellSpacing) chosen uniformly.
BlockerModel build_random_walk(std::vector<Point> cells, double cellSpacing, double stayProbability,
                               double radius = 0.3);

/// Builds successor lists from an explicit transition matrix; rows must be
/// stochastic.
BlockerModel from_transition_matrix(std::vector<Point> cells, std::vector<double> transition,
                                    double radius);

/// Inverse-CDF sample of the next cell from one uniform draw in [0, 1).
std::size_t step_with_uniform(const BlockerModel& model, std::size_t current, double u);

inline std::size_t step(const BlockerModel& model, std::size_t current, RandomStream& rng) {
  return step_with_uniform(model, current, rng.uniform());
}

/// Distribution of the cell after n steps from `start`.
std::vector<double> n_step_distribution(const BlockerModel& model, std::size_t start, int n);

}  // namespace aoisched
