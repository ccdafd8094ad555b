#include "aoisched/mdp_core.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace aoisched {

int CostWeights::max_data_volume() const {
  return dataVolume.empty() ? 0 : *std::max_element(dataVolume.begin(), dataVolume.end());
}

void CostWeights::validate() const {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  if (aMax < 2) throw std::invalid_argument("aMax must be at least 2");
  if (!(frameSec > 0.0)) throw std::invalid_argument("frame length must be positive");
  if (wP < 0.0 || wQ < 0.0 || sampleEnergyJ < 0.0)
    throw std::invalid_argument("cost weights must be nonnegative");
  if (dataVolume.empty()) throw std::invalid_argument("at least one sensor is required");
  for (int l : dataVolume)
    if (l < 1) throw std::invalid_argument("data volume must be at least one packet");
}

CostBreakdown& CostBreakdown::operator+=(const CostBreakdown& o) {
  serverAoi += o.serverAoi;
  samplingEnergy += o.samplingEnergy;
  transmissionEnergy += o.transmissionEnergy;
  outdatedPenalty += o.outdatedPenalty;
  return *this;
}

CostBreakdown cost_breakdown(const std::vector<LocalState>& sensors, const Action& action,
                             const CostWeights& weights) {
  if (sensors.size() != action.size()) throw std::invalid_argument("action size does not match state");
  CostBreakdown c;
  for (std::size_t k = 0; k < sensors.size(); ++k) {
    c.serverAoi += sensors[k].aoiServer;
    c.samplingEnergy += weights.wP * action[k].sample * weights.sampleEnergyJ;
    c.transmissionEnergy += weights.wP * action[k].tauSec * action[k].powerW;
    if (sensors[k].aoiServer == weights.aMax) c.outdatedPenalty += weights.wQ;
  }
  return c;
}

LocalState advance_local(const LocalState& local, int sample, int departed, int dataVolume, int aMax,
                         DrainRule rule) {
  if (departed < 0) throw std::invalid_argument("departures must be nonnegative");
  const int buffer = transmit_buffer(local, sample, dataVolume);
  const int d = std::min(departed, buffer);
  LocalState next;
  next.queue = buffer - d;
  next.aoiSensor = sample ? 1 : std::min(local.aoiSensor + 1, aMax);
  const bool drained = next.queue == 0 && !(sample && rule == DrainRule::SkipOnSampling);
  next.aoiServer = drained ? next.aoiSensor : std::min(local.aoiServer + 1, aMax);
  return next;
}

std::size_t epsilon_index(const LocalState& local, int dataVolume, int aMax) {
  if (local.queue < 0 || local.queue > dataVolume || local.aoiSensor < 1 || local.aoiSensor > aMax ||
      local.aoiServer < 1 || local.aoiServer > aMax)
    throw std::out_of_range("local state out of range");
  const auto a = static_cast<std::size_t>(aMax);
  return static_cast<std::size_t>(local.queue) * a * a +
         static_cast<std::size_t>(local.aoiSensor - 1) * a + static_cast<std::size_t>(local.aoiServer);
}

std::size_t kappa_index(std::size_t cell, const LocalState& local, int dataVolume, int aMax) {
  return cell * local_block_size(dataVolume, aMax) + epsilon_index(local, dataVolume, aMax);
}

KappaTuple inverse_kappa(std::size_t kappa, int dataVolume, int aMax) {
  if (kappa < 1) throw std::out_of_range("kappa is 1-based");
  const std::size_t block = local_block_size(dataVolume, aMax);
  const auto a = static_cast<std::size_t>(aMax);
  KappaTuple t;
  t.cell = (kappa - 1) / block;
  std::size_t e = (kappa - 1) % block;  // epsilon - 1
  t.local.queue = static_cast<int>(e / (a * a));
  e %= a * a;
  t.local.aoiSensor = static_cast<int>(e / a) + 1;
  t.local.aoiServer = static_cast<int>(e % a) + 1;
  return t;
}

std::vector<LocalTransition> transition_support(std::size_t cell, const LocalState& local,
                                                int sample, int departed, int dataVolume,
                                                const CostWeights& weights,
                                                const BlockerModel& blocker) {
  const LocalState next = advance_local(local, sample, departed, dataVolume, weights.aMax, weights.drainRule);
  std::vector<LocalTransition> out;
  for (const auto& [to, p] : blocker.successors.at(cell)) out.push_back({to, next, p});
  return out;
}

void check_action(const Action& action, const CostWeights& weights, double maxPowerW) {
  double total = 0.0;
  for (std::size_t k = 0; k < action.size(); ++k) {
    const auto& a = action[k];
    if (a.sample != 0 && a.sample != 1)
      throw std::invalid_argument("sensor " + std::to_string(k) + ": sample must be 0 or 1");
    if (!(a.tauSec >= 0.0) || a.tauSec > weights.frameSec * (1.0 + 1e-9))
      throw std::invalid_argument("sensor " + std::to_string(k) + ": time outside [0, T_F]");
    if (!(a.powerW >= 0.0) || a.powerW > maxPowerW * (1.0 + 1e-9))
      throw std::invalid_argument("sensor " + std::to_string(k) + ": power outside [0, P_max]");
    total += a.tauSec;
  }
  if (total > weights.frameSec * (1.0 + 1e-9)) throw std::invalid_argument("total time exceeds the frame");
}

}  // namespace aoisched
