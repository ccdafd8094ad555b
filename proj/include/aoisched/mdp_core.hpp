#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "aoisched/mobility.hpp"

namespace aoisched {

/// How the server AoI reacts when a sensor samples and the whole new sample
/// departs in the same frame.
enum class DrainRule {
  PostAction,      // drain test on the post-action queue; server AoI becomes 1
  SkipOnSampling,  // no server update on sampling frames
};

struct CostWeights {
  double wP = 1e4;
  double wQ = 100.0;
  double sampleEnergyJ = 1e-4;
  int aMax = 10;
  double gamma = 0.98;
  double frameSec = 0.01;
  std::vector<int> dataVolume;  // L_k per sensor
  DrainRule drainRule = DrainRule::PostAction;

  std::size_t sensor_count() const { return dataVolume.size(); }
  int max_data_volume() const;
  void validate() const;
};

struct LocalState {
  int queue = 0;
  int aoiSensor = 1;
  int aoiServer = 1;

  friend bool operator==(const LocalState&, const LocalState&) = default;
};

struct AbstractState {
  std::size_t blockerCell = 0;
  std::vector<LocalState> sensors;

  friend bool operator==(const AbstractState&, const AbstractState&) = default;
};

struct SystemState {
  std::size_t blockerCell = 0;
  std::vector<double> gains;  // Y per sensor, 1/W
  std::vector<LocalState> sensors;

  AbstractState abstract() const { return {blockerCell, sensors}; }
};

struct SensorAction {
  int sample = 0;
  double tauSec = 0.0;
  double powerW = 0.0;

  friend bool operator==(const SensorAction&, const SensorAction&) = default;
};

using Action = std::vector<SensorAction>;

struct CostBreakdown {
  double serverAoi = 0.0;
  double samplingEnergy = 0.0;      // wP * C^s * #samples
  double transmissionEnergy = 0.0;  // wP * sum tau p
  double outdatedPenalty = 0.0;

  double total() const { return serverAoi + samplingEnergy + transmissionEnergy + outdatedPenalty; }
  CostBreakdown& operator+=(const CostBreakdown& o);
};

CostBreakdown cost_breakdown(const std::vector<LocalState>& sensors, const Action& action,
                             const CostWeights& weights);

inline double per_frame_cost(const SystemState& state, const Action& action,
                             const CostWeights& weights) {
  return cost_breakdown(state.sensors, action, weights).total();
}

/// Number of packets in the buffer that transmits this frame.
inline int transmit_buffer(const LocalState& local, int sample, int dataVolume) {
  return sample ? dataVolume : local.queue;
}

/// Local queue and AoI recursions. `departed` is capped at the transmitting buffer.
LocalState advance_local(const LocalState& local, int sample, int departed, int dataVolume,
                         int aMax, DrainRule rule = DrainRule::PostAction);

/// Size (L_k + 1) A_max^2 of the per-cell local block.
inline std::size_t local_block_size(int dataVolume, int aMax) {
  return static_cast<std::size_t>(dataVolume + 1) * static_cast<std::size_t>(aMax) *
         static_cast<std::size_t>(aMax);
}

/// 1-based epsilon(Q, A^s, A^d) = Q A_max^2 + (A^s - 1) A_max + A^d.
std::size_t epsilon_index(const LocalState& local, int dataVolume, int aMax);

/// 1-based kappa for a 0-based blocker cell (the cell l in the 1-based
/// formula is cell + 1).
std::size_t kappa_index(std::size_t cell, const LocalState& local, int dataVolume, int aMax);

struct KappaTuple {
  std::size_t cell = 0;
  LocalState local;
};

KappaTuple inverse_kappa(std::size_t kappa, int dataVolume, int aMax);

struct LocalTransition {
  std::size_t cell = 0;
  LocalState local;
  double probability = 0.0;
};

/// Successor local states when exactly `departed` packets leave; the only
/// randomness left is the blocker move.
std::vector<LocalTransition> transition_support(std::size_t cell, const LocalState& local,
                                                int sample, int departed, int dataVolume,
                                                const CostWeights& weights,
                                                const BlockerModel& blocker);

/// Throws std::invalid_argument when an action violates the frame and power
/// limits (sum tau <= T_F within 1e-9 T_F).
void check_action(const Action& action, const CostWeights& weights, double maxPowerW);

}  // namespace aoisched
