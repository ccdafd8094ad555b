#include "aoisched/harness.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <stdexcept>

#include "aoisched/channel.hpp"
#include "aoisched/mobility.hpp"
#include "aoisched/random.hpp"

namespace aoisched {

AbstractState cold_start(const Model& model, std::size_t cell, LocalState initial) {
  if (cell >= model.cell_count()) throw std::out_of_range("start cell out of range");
  return {cell, std::vector<LocalState>(model.sensor_count(), initial)};
}

EpisodeResult run_episode(const Model& model, const Policy& policy, const EpisodeOptions& options) {
  const std::size_t K = model.sensor_count();
  const auto& w = model.weights;
  if (options.start.sensors.size() != K) throw std::invalid_argument("start state has the wrong sensor count");

  RandomStream blockerRng(options.seed, StreamPurpose::Blocker);
  std::vector<RandomStream> gainRng;
  gainRng.reserve(K);
  for (std::size_t k = 0; k < K; ++k) gainRng.emplace_back(options.seed, StreamPurpose::Gain, k);

  EpisodeResult out;
  if (options.keepCosts) out.costs.reserve(static_cast<std::size_t>(options.frames));
  FrameRecord rec;
  rec.state.blockerCell = options.start.blockerCell;
  rec.state.sensors = options.start.sensors;
  rec.state.gains.assign(K, 0.0);
  rec.departed.assign(K, 0);
  IterationTrace trace;
  double discount = 1.0;

  for (long t = 0; t < options.frames; ++t) {
    rec.frame = t;
    const std::size_t cell = rec.state.blockerCell;
    for (std::size_t k = 0; k < K; ++k) {
      const double e = gainRng[k].exponential();
      const auto rate = model.links.rate(k, cell);
      rec.state.gains[k] = rate ? e / *rate : 0.0;
    }
    rec.action = policy.act(rec.state, options.keepTraces ? &trace : nullptr);
    for (std::size_t k = 0; k < K; ++k) {
      const auto& a = rec.action[k];
      rec.departed[k] = std::min(departures(a.tauSec, a.powerW, rec.state.gains[k], model.channel),
                                 transmit_buffer(rec.state.sensors[k], a.sample, w.dataVolume[k]));
    }
    rec.cost = cost_breakdown(rec.state.sensors, rec.action, w);
    out.totals += rec.cost;
    const double c = rec.cost.total();
    out.discounted += discount * c;
    discount *= w.gamma;
    if (options.keepCosts) out.costs.push_back(c);
    if (options.observer) options.observer(rec, options.keepTraces ? &trace : nullptr);

    const std::size_t nextCell = step(model.blocker, cell, blockerRng);
    for (std::size_t k = 0; k < K; ++k)
      rec.state.sensors[k] = advance_local(rec.state.sensors[k], rec.action[k].sample, rec.departed[k],
                                           w.dataVolume[k], w.aMax, w.drainRule);
    rec.state.blockerCell = nextCell;
  }
  out.frames = options.frames;
  return out;
}

MonteCarloResult summarize(std::vector<double> samples) {
  MonteCarloResult r;
  const auto n = static_cast<double>(samples.size());
  if (samples.empty()) return r;
  r.mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  if (samples.size() > 1) {
    double ss = 0.0;
    for (double x : samples) ss += (x - r.mean) * (x - r.mean);
    r.stdError = std::sqrt(ss / (n - 1.0) / n);
  }
  r.halfWidth = 1.959963984540054 * r.stdError;
  r.samples = std::move(samples);
  return r;
}

MonteCarloResult monte_carlo_value(const Model& model, const Policy& policy, const AbstractState& start,
                                   int rollouts, long horizon, std::uint64_t seed, unsigned threads) {
  if (rollouts < 1) throw std::invalid_argument("need at least one rollout");
  std::vector<double> samples(static_cast<std::size_t>(rollouts));
  auto run_range = [&](int begin, int end) {
    EpisodeOptions opt;
    opt.frames = horizon;
    opt.start = start;
    opt.keepCosts = false;
    for (int r = begin; r < end; ++r) {
      opt.seed = derive_seed(seed, StreamPurpose::Validation, static_cast<std::uint64_t>(r));
      samples[static_cast<std::size_t>(r)] = run_episode(model, policy, opt).discounted;
    }
  };
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rollouts)));
  if (threads == 1) {
    run_range(0, rollouts);
  } else {
    std::vector<std::future<void>> jobs;
    const int chunk = (rollouts + static_cast<int>(threads) - 1) / static_cast<int>(threads);
    for (int b = 0; b < rollouts; b += chunk)
      jobs.push_back(std::async(std::launch::async, run_range, b, std::min(rollouts, b + chunk)));
    for (auto& j : jobs) j.get();
  }
  return summarize(std::move(samples));
}

long TransitionCounts::visits(std::size_t k, std::size_t row) const {
  const auto& m = perSensor.at(k);
  const auto it = m.find(row);
  if (it == m.end()) return 0;
  long n = 0;
  for (const auto& [col, c] : it->second) n += c;
  return n;
}

SparseMatrix TransitionCounts::row_normalized(std::size_t k, std::size_t dimension) const {
  std::vector<Eigen::Triplet<double>> trip;
  for (const auto& [row, cols] : perSensor.at(k)) {
    const double n = static_cast<double>(visits(k, row));
    for (const auto& [col, c] : cols)
      trip.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col), static_cast<double>(c) / n);
  }
  SparseMatrix m(static_cast<Eigen::Index>(dimension), static_cast<Eigen::Index>(dimension));
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

TransitionCounts empirical_transitions(const Model& model, long frames, std::uint64_t seed, std::size_t startCell) {
  const std::size_t K = model.sensor_count();
  const auto& w = model.weights;
  const auto policy = make_policy("bm1", model, nullptr);
  TransitionCounts counts;
  counts.perSensor.resize(K);

  std::vector<std::size_t> prev(K, 0);
  bool havePrev = false;
  EpisodeOptions opt;
  opt.frames = frames + 1;
  opt.seed = seed;
  opt.start = cold_start(model, startCell);
  opt.keepCosts = false;
  opt.observer = [&](const FrameRecord& rec, const IterationTrace*) {
    for (std::size_t k = 0; k < K; ++k) {
      const std::size_t idx = kappa_index(rec.state.blockerCell, rec.state.sensors[k], w.dataVolume[k], w.aMax) - 1;
      if (havePrev) ++counts.perSensor[k][prev[k]][idx];
      prev[k] = idx;
    }
    havePrev = true;
  };
  run_episode(model, *policy, opt);
  return counts;
}

}  // namespace aoisched
