#include "aoisched/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace aoisched {

namespace {

void fill_successors(BlockerModel& model) {
  const std::size_t n = model.cells.size();
  model.successors.assign(n, {});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (const double p = model.transition[i * n + j]; p > 0.0) model.successors[i].emplace_back(j, p);
}

}  // namespace

BlockerModel build_random_walk(std::vector<Point> cells, double cellSpacing, double stayProbability,
                               double radius) {
  if (cells.empty()) throw std::invalid_argument("blocker model needs at least one cell");
  if (!(stayProbability >= 0.0 && stayProbability <= 1.0))
    throw std::invalid_argument("stay probability must lie in [0, 1]");
  if (!(cellSpacing > 0.0)) throw std::invalid_argument("cell spacing must be positive");

  const std::size_t n = cells.size();
  BlockerModel model;
  model.cells = std::move(cells);
  model.radius = radius;
  model.stayProbability = stayProbability;
  model.transition.assign(n * n, 0.0);

  const double reach = cellSpacing * (1.0 + 1e-9);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> neighbors;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && distance(model.cells[i], model.cells[j]) <= reach) neighbors.push_back(j);
    if (neighbors.empty()) {
      model.transition[i * n + i] = 1.0;
      continue;
    }
    model.transition[i * n + i] = stayProbability;
    const double move = (1.0 - stayProbability) / static_cast<double>(neighbors.size());
    for (std::size_t j : neighbors) model.transition[i * n + j] = move;
  }
  fill_successors(model);
  return model;
}

BlockerModel from_transition_matrix(std::vector<Point> cells, std::vector<double> transition,
                                    double radius) {
  const std::size_t n = cells.size();
  if (n == 0) throw std::invalid_argument("blocker model needs at least one cell");
  if (transition.size() != n * n) throw std::invalid_argument("transition matrix has the wrong size");
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double p = transition[i * n + j];
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("transition entries must lie in [0, 1]");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("transition row " + std::to_string(i) + " does not sum to 1");
  }
  BlockerModel model;
  model.cells = std::move(cells);
  model.radius = radius;
  model.stayProbability = transition[0];
  model.transition = std::move(transition);
  fill_successors(model);
  return model;
}

std::size_t step_with_uniform(const BlockerModel& model, std::size_t current, double u) {
  const auto& row = model.successors.at(current);
  double acc = 0.0;
  for (const auto& [cell, p] : row) {
    acc += p;
    if (u < acc) return cell;
  }
  // Rounding can leave acc a hair below 1.
  return row.back().first;
}

std::vector<double> n_step_distribution(const BlockerModel& model, std::size_t start, int n) {
  if (n < 0) throw std::invalid_argument("step count must be nonnegative");
  const std::size_t size = model.cell_count();
  std::vector<double> dist(size, 0.0), next(size);
  dist.at(start) = 1.0;
  for (int step = 0; step < n; ++step) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < size; ++i) {
      if (dist[i] == 0.0) continue;
      for (const auto& [j, p] : model.successors[i]) next[j] += dist[i] * p;
    }
    dist.swap(next);
  }
  return dist;
}

}  // namespace aoisched
