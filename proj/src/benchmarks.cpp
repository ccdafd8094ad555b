#include "aoisched/benchmarks.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "aoisched/channel.hpp"
#include "aoisched/reference_policy.hpp"

namespace aoisched {

namespace {

// Sequential TDMA: serve `order` one by one with the drain time of the
// post-sampling buffer at P^Pi, capped by what is left of the frame.
Action serve_in_order(const SystemState& state, const Model& model, const std::vector<std::size_t>& order) {
  const auto& w = model.weights;
  Action a(state.sensors.size());
  for (std::size_t k = 0; k < a.size(); ++k) a[k].sample = state.sensors[k].queue == 0 ? 1 : 0;
  double remaining = w.frameSec;
  for (std::size_t k : order) {
    if (remaining <= 0.0) break;
    const int buffer = transmit_buffer(state.sensors[k], a[k].sample, w.dataVolume[k]);
    const double rate = capacity(model.referencePowerW, state.gains[k], model.channel);
    const double drain = rate > 0.0 ? buffer * model.channel.packetBits / rate : std::numeric_limits<double>::infinity();
    const double tau = std::min(remaining, drain);
    if (tau <= 0.0) continue;
    a[k].tauSec = tau;
    a[k].powerW = model.referencePowerW;
    remaining -= tau;
  }
  return a;
}

}  // namespace

Action bm1(const SystemState& state, const Model& model) { return reference_action(model, state.sensors); }

Action bm2(const SystemState& state, const Model& model) {
  std::vector<std::size_t> order(state.sensors.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return state.sensors[a].aoiServer > state.sensors[b].aoiServer;
  });
  return serve_in_order(state, model, order);
}

Action bm3(const SystemState& state, const Model& model) {
  std::vector<double> priority(state.sensors.size());
  std::vector<std::size_t> order;
  for (std::size_t k = 0; k < state.sensors.size(); ++k) {
    priority[k] = state.sensors[k].queue * capacity(model.referencePowerW, state.gains[k], model.channel);
    if (priority[k] > 0.0) order.push_back(k);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return priority[a] > priority[b]; });
  return serve_in_order(state, model, order);
}

}  // namespace aoisched
