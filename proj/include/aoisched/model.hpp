#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "aoisched/channel.hpp"
#include "aoisched/geometry.hpp"
#include "aoisched/mdp_core.hpp"
#include "aoisched/mobility.hpp"

namespace aoisched {

/// Everything a policy or simulation needs about one scenario. Immutable
/// once built.
struct Model {
  RoomLayout room;
  BlockerModel blocker;
  ChannelParams channel;
  CostWeights weights;
  double carrierGHz = 60.0;
  double nlosExtraLossDb = 15.0;
  double referencePowerW = 0.05;  // P^Pi
  LinkTable links;

  std::size_t sensor_count() const { return weights.sensor_count(); }
  std::size_t cell_count() const { return blocker.cell_count(); }

  /// Per-sensor reference time T_F L_k / sum L.
  std::vector<double> reference_times() const;
};

/// Checks cross-section consistency and builds the link table.
Model assemble_model(RoomLayout room, BlockerModel blocker, ChannelParams channel, CostWeights weights,
                     double carrierGHz, double nlosExtraLossDb, double referencePowerW);

/// FNV-1a over every quantity the reference tables depend on.
std::uint64_t table_hash(const Model& model);

}  // namespace aoisched
