#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "aoisched/mdp_core.hpp"
#include "aoisched/model.hpp"
#include "aoisched/policy.hpp"
#include "aoisched/reference_policy.hpp"

namespace aoisched {

struct FrameRecord {
  long frame = 0;
  SystemState state;
  Action action;
  std::vector<int> departed;
  CostBreakdown cost;
};

struct EpisodeOptions {
  long frames = 1000;
  std::uint64_t seed = 1;
  AbstractState start;
  bool keepCosts = true;
  bool keepTraces = false;  // ask iterating policies for their traces
  std::function<void(const FrameRecord&, const IterationTrace*)> observer;
};

struct EpisodeResult {
  long frames = 0;
  CostBreakdown totals;
  std::vector<double> costs;  // per-frame totals when keepCosts
  double discounted = 0.0;    // sum gamma^t cost_t

  double mean_cost() const { return frames ? totals.total() / static_cast<double>(frames) : 0.0; }
};

/// Cold start: queues empty, both AoIs 1, blocker at `cell`.
AbstractState cold_start(const Model& model, std::size_t cell, LocalState initial = {0, 1, 1});

/// Frame loop. Randomness comes from substreams of `seed`: one blocker stream
/// (one uniform per frame) and one gain stream per sensor (one unit
/// exponential per frame, drawn even when blocked), so different policies run
/// with the same seed see identical blocker moves and fading.
EpisodeResult run_episode(const Model& model, const Policy& policy, const EpisodeOptions& options);

struct MonteCarloResult {
  double mean = 0.0;
  double stdError = 0.0;
  double halfWidth = 0.0;  // 95% normal-approximation half width
  std::vector<double> samples;

  double lower() const { return mean - halfWidth; }
  double upper() const { return mean + halfWidth; }
};

MonteCarloResult summarize(std::vector<double> samples);

/// Discounted cost from `start` over independent rollouts; rollout r uses the
/// same substream for every policy.
MonteCarloResult monte_carlo_value(const Model& model, const Policy& policy, const AbstractState& start,
                                   int rollouts, long horizon, std::uint64_t seed, unsigned threads = 1);

/// Transition counts of each sensor's local abstract state under Pi, keyed
/// by 0-based kappa of the source and destination.
struct TransitionCounts {
  std::vector<std::map<std::size_t, std::map<std::size_t, long>>> perSensor;

  long visits(std::size_t k, std::size_t row) const;
  SparseMatrix row_normalized(std::size_t k, std::size_t dimension) const;
};

TransitionCounts empirical_transitions(const Model& model, long frames, std::uint64_t seed, std::size_t startCell = 0);

}  // namespace aoisched
