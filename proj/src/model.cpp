#include "aoisched/model.hpp"

#include <bit>
#include <numeric>
#include <stdexcept>

namespace aoisched {

std::vector<double> Model::reference_times() const {
  const double total = std::accumulate(weights.dataVolume.begin(), weights.dataVolume.end(), 0.0);
  std::vector<double> tau;
  tau.reserve(weights.dataVolume.size());
  for (int l : weights.dataVolume) tau.push_back(weights.frameSec * l / total);
  return tau;
}

Model assemble_model(RoomLayout room, BlockerModel blocker, ChannelParams channel, CostWeights weights,
                     double carrierGHz, double nlosExtraLossDb, double referencePowerW) {
  room.validate();
  channel.validate();
  weights.validate();
  if (weights.sensor_count() != room.sensor_count())
    throw std::invalid_argument("data volume list must have one entry per sensor");
  if (blocker.cells != room.blockerCells)
    throw std::invalid_argument("blocker model cells differ from the room's blocker cells");
  if (!(carrierGHz > 0.0)) throw std::invalid_argument("carrier frequency must be positive");
  if (!(referencePowerW > 0.0) || referencePowerW > channel.maxPowerW)
    throw std::invalid_argument("reference power must lie in (0, P_max]");

  Model m;
  m.links = LinkTable(room, blocker.radius, channel, carrierGHz, nlosExtraLossDb);
  m.room = std::move(room);
  m.blocker = std::move(blocker);
  m.channel = channel;
  m.weights = std::move(weights);
  m.carrierGHz = carrierGHz;
  m.nlosExtraLossDb = nlosExtraLossDb;
  m.referencePowerW = referencePowerW;
  return m;
}

namespace {

struct Fnv1a {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= c[i];
      h *= 0x100000001b3ULL;
    }
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    bytes(&bits, sizeof bits);
  }
  void i64(std::int64_t v) { bytes(&v, sizeof v); }
};

}  // namespace

std::uint64_t table_hash(const Model& m) {
  Fnv1a f;
  f.i64(static_cast<std::int64_t>(m.sensor_count()));
  f.i64(static_cast<std::int64_t>(m.cell_count()));
  for (double p : m.blocker.transition) f.f64(p);
  for (std::size_t k = 0; k < m.sensor_count(); ++k)
    for (std::size_t c = 0; c < m.cell_count(); ++c) {
      const auto rate = m.links.rate(k, c);
      f.f64(rate ? *rate : -1.0);
    }
  f.f64(m.channel.bandwidthHz);
  f.f64(m.channel.packetBits);
  f.f64(m.weights.wP);
  f.f64(m.weights.wQ);
  f.f64(m.weights.sampleEnergyJ);
  f.i64(m.weights.aMax);
  f.f64(m.weights.gamma);
  f.f64(m.weights.frameSec);
  for (int l : m.weights.dataVolume) f.i64(l);
  f.i64(static_cast<std::int64_t>(m.weights.drainRule));
  f.f64(m.referencePowerW);
  return f.h;
}

}  // namespace aoisched
