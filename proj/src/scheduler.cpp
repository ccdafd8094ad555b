#include "aoisched/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "aoisched/lambert_w.hpp"

namespace aoisched {

double power_from(int d, double tauSec, double gainY, const ChannelParams& params) {
  if (d < 0) throw std::invalid_argument("packet count must be nonnegative");
  if (d == 0) return 0.0;
  if (!(tauSec > 0.0)) throw std::invalid_argument("positive packet count needs positive time");
  if (!(gainY > 0.0)) throw std::invalid_argument("positive packet count needs positive gain");
  return std::expm1(std::numbers::ln2 * d * params.packetBits / (tauSec * params.bandwidthHz)) / gainY;
}

double min_transmit_time(int d, double gainY, const ChannelParams& params) {
  if (d <= 0) return 0.0;
  if (!(gainY > 0.0)) return std::numeric_limits<double>::infinity();
  return d * params.packetBits / (params.bandwidthHz * std::log2(1.0 + params.maxPowerW * gainY));
}

P23Result solve_p23(const std::vector<int>& packets, const std::vector<double>& gains,
                    const ChannelParams& params, double frameSec) {
  if (packets.size() != gains.size()) throw std::invalid_argument("packets and gains differ in size");
  const std::size_t K = packets.size();
  P23Result out;
  out.tau.assign(K, 0.0);

  std::vector<std::size_t> active;
  double minTotal = 0.0;
  std::vector<double> minTime(K, 0.0), scale(K, 0.0);
  for (std::size_t k = 0; k < K; ++k) {
    if (packets[k] <= 0) continue;
    active.push_back(k);
    minTime[k] = min_transmit_time(packets[k], gains[k], params);
    scale[k] = packets[k] * params.packetBits / params.bandwidthHz;
    minTotal += minTime[k];
  }
  if (active.empty()) return out;
  if (!(minTotal <= frameSec * (1.0 + 1e-12))) {
    out.feasible = false;
    return out;
  }

  if (active.size() == 1) {
    const std::size_t k = active.front();
    out.tau[k] = frameSec;
    const double w = scale[k] * std::numbers::ln2 / frameSec - 1.0;
    out.nu = (std::numbers::e * w * std::exp(w) + 1.0) / gains[k];
    return out;
  }

  // tau_k(nu) = c_k ln2 / (1 + W0((Y nu - 1)/e)), floored at the minimum time.
  // sum_k tau_k falls with nu; solve sum = T_F by Newton on log nu inside a
  // bisection bracket.
  double sum = 0.0, slope = 0.0;
  auto evaluate = [&](double nu) {
    sum = 0.0;
    slope = 0.0;  // d sum / d log nu
    for (std::size_t k : active) {
      const double x = (gains[k] * nu - 1.0) / std::numbers::e;
      const double w = lambert_w0(x);
      double t = 1.0 + w > 0.0 ? scale[k] * std::numbers::ln2 / (1.0 + w) : std::numeric_limits<double>::infinity();
      if (t > minTime[k]) {
        const double dw = std::exp(-w) / (1.0 + w) * gains[k] / std::numbers::e;
        slope -= t / (1.0 + w) * dw * nu;
      } else {
        t = minTime[k];
      }
      out.tau[k] = t;
      sum += t;
    }
  };

  // start from the multiplier that matches a share proportional to c_k
  double scaleSum = 0.0, logNu = 0.0;
  for (std::size_t k : active) scaleSum += scale[k];
  int guesses = 0;
  for (std::size_t k : active) {
    const double w = std::numbers::ln2 * scaleSum / frameSec - 1.0;
    const double nu = (std::numbers::e * w * std::exp(w) + 1.0) / gains[k];
    if (std::isfinite(nu) && nu > 0.0) {
      logNu += std::log(nu);
      ++guesses;
    }
  }
  double nu = guesses ? std::exp(logNu / guesses) : 1.0;
  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 500; ++i) {
    evaluate(nu);
    const double f = sum - frameSec;
    if (f > 0.0)
      lo = nu;
    else
      hi = nu;
    if (std::abs(f) <= 1e-14 * frameSec) break;
    if (std::isfinite(hi) && lo > 0.0 && hi - lo <= 1e-15 * hi) {
      if (nu != hi) evaluate(hi);
      nu = hi;
      break;
    }
    double next = nu;
    if (std::isfinite(f) && slope < 0.0) next = nu * std::exp(std::clamp(-f / slope, -8.0, 8.0));
    if (next == nu || !(next > lo && next < hi))
      next = lo > 0.0 && std::isfinite(hi) ? std::sqrt(lo * hi) : (f > 0.0 ? nu * 16.0 : nu / 16.0);
    nu = next;
  }
  out.nu = nu;
  return out;
}

std::vector<int> repair_packets(std::vector<int> packets, const std::vector<double>& gains,
                                const ChannelParams& params, double frameSec) {
  auto total = [&] {
    double s = 0.0;
    for (std::size_t k = 0; k < packets.size(); ++k) s += min_transmit_time(packets[k], gains[k], params);
    return s;
  };
  while (!(total() <= frameSec * (1.0 + 1e-12))) {
    std::size_t pick = packets.size();
    double worst = -1.0;
    for (std::size_t k = 0; k < packets.size(); ++k) {
      if (packets[k] <= 0) continue;
      const double marginal = min_transmit_time(1, gains[k], params);
      if (marginal > worst) {
        worst = marginal;
        pick = k;
      }
    }
    if (pick == packets.size()) break;
    --packets[pick];
  }
  return packets;
}

int IterationTrace::last_improvement(double tol) const {
  int last = 0;
  for (std::size_t n = 1; n < iterations.size(); ++n)
    if (iterations[n - 1].objective - iterations[n].objective >= tol) last = static_cast<int>(n);
  return last;
}

Scheduler::Scheduler(const Model& model, const ReferenceTables& tables, SchedulerOptions options)
    : model_(model), tables_(tables), options_(options), referenceTimes_(model.reference_times()) {
  if (tables.sensors.size() != model.sensor_count())
    throw std::invalid_argument("reference tables do not match the model's sensor count");
  if (options_.maxIters < 1) throw std::invalid_argument("maxIters must be at least 1");
}

double Scheduler::expected_next_value(std::size_t k, std::size_t cell, const LocalState& next) const {
  double v = 0.0;
  for (const auto& [to, p] : model_.blocker.successors[cell]) v += p * tables_.local_value(k, to, next);
  return v;
}

double Scheduler::sensor_objective(const SystemState& state, std::size_t k, const SensorAction& a, int d) const {
  const auto& w = model_.weights;
  const LocalState next = advance_local(state.sensors[k], a.sample, d, w.dataVolume[k], w.aMax, w.drainRule);
  return w.wP * (a.tauSec * a.powerW + a.sample * w.sampleEnergyJ) +
         w.gamma * expected_next_value(k, state.blockerCell, next);
}

double Scheduler::objective(const SystemState& state, const Action& action, const std::vector<int>& packets) const {
  double total = 0.0;
  for (std::size_t k = 0; k < action.size(); ++k) total += sensor_objective(state, k, action[k], packets[k]);
  return total;
}

int Scheduler::solve_p21(const SystemState& state, std::size_t k, double prevTau, double prevPower) const {
  const auto& w = model_.weights;
  const LocalState& local = state.sensors[k];
  const int delivered = departures(prevTau, prevPower, state.gains[k], model_.channel);
  double best = 0.0;
  int choice = 0;
  for (int s = 0; s <= 1; ++s) {
    const int d = std::min(delivered, transmit_buffer(local, s, w.dataVolume[k]));
    const LocalState next = advance_local(local, s, d, w.dataVolume[k], w.aMax, w.drainRule);
    const double obj = w.wP * s * w.sampleEnergyJ + w.gamma * expected_next_value(k, state.blockerCell, next);
    if (s == 0 || obj < best) {
      best = obj;
      choice = s;
    }
  }
  return choice;
}

int Scheduler::solve_p22(const SystemState& state, std::size_t k, int sample, double prevTau) const {
  const auto& w = model_.weights;
  const LocalState& local = state.sensors[k];
  const double Y = state.gains[k];
  const int cap = transmit_buffer(local, sample, w.dataVolume[k]);
  double best = 0.0;
  int choice = 0;
  for (int d = 0; d <= cap; ++d) {
    double p = 0.0;
    if (d > 0) {
      if (!(prevTau > 0.0) || !(Y > 0.0)) break;
      p = power_from(d, prevTau, Y, model_.channel);
      if (p > model_.channel.maxPowerW * (1.0 + 1e-12)) break;
    }
    const LocalState next = advance_local(local, sample, d, w.dataVolume[k], w.aMax, w.drainRule);
    const double obj = w.wP * prevTau * p + w.gamma * expected_next_value(k, state.blockerCell, next);
    if (d == 0 || obj < best) {
      best = obj;
      choice = d;
    }
  }
  return choice;
}

ScheduleResult Scheduler::schedule(const SystemState& state) const {
  const std::size_t K = model_.sensor_count();
  const auto& w = model_.weights;
  const auto& ch = model_.channel;
  if (state.sensors.size() != K || state.gains.size() != K)
    throw std::invalid_argument("state does not match the model's sensor count");

  ScheduleResult out;
  IterationRecord cur;
  cur.sample.resize(K);
  cur.packets.resize(K);
  cur.tau = referenceTimes_;
  cur.power.assign(K, model_.referencePowerW);
  Action action(K);
  for (std::size_t k = 0; k < K; ++k) {
    cur.sample[k] = state.sensors[k].queue == 0 ? 1 : 0;
    cur.packets[k] = std::min(departures(cur.tau[k], cur.power[k], state.gains[k], ch),
                              transmit_buffer(state.sensors[k], cur.sample[k], w.dataVolume[k]));
    action[k] = {cur.sample[k], cur.tau[k], cur.power[k]};
  }
  cur.objective = objective(state, action, cur.packets);
  out.trace.iterations.push_back(cur);

  for (int n = 1; n <= options_.maxIters; ++n) {
    const IterationRecord& prev = out.trace.iterations.back();
    IterationRecord next;
    next.sample.resize(K);
    next.packets.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
      next.sample[k] = solve_p21(state, k, prev.tau[k], prev.power[k]);
      next.packets[k] = solve_p22(state, k, next.sample[k], prev.tau[k]);
    }

    P23Result p23 = solve_p23(next.packets, state.gains, ch, w.frameSec);
    if (!p23.feasible) {
      next.packets = repair_packets(next.packets, state.gains, ch, w.frameSec);
      p23 = solve_p23(next.packets, state.gains, ch, w.frameSec);
      if (!p23.feasible) throw std::runtime_error("packet repair failed to restore feasibility");
    }
    // The previous times are feasible for the new packet counts; keep them if
    // the closed form lands on a higher energy through rounding.
    double eNew = 0.0, ePrev = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      if (next.packets[k] == 0) continue;
      eNew += p23.tau[k] * power_from(next.packets[k], p23.tau[k], state.gains[k], ch);
      ePrev += prev.tau[k] * power_from(next.packets[k], prev.tau[k], state.gains[k], ch);
    }
    next.tau = eNew <= ePrev ? p23.tau : prev.tau;

    next.power.resize(K);
    for (std::size_t k = 0; k < K; ++k) {
      const double p = power_from(next.packets[k], next.tau[k], state.gains[k], ch);
      next.power[k] = std::min(p, ch.maxPowerW);
      action[k] = {next.sample[k], next.tau[k], next.power[k]};
    }
    next.objective = objective(state, action, next.packets);
    const double gain = prev.objective - next.objective;
    out.trace.iterations.push_back(std::move(next));
    if (gain < options_.tol) break;
  }

  const IterationRecord& fin = out.trace.iterations.back();
  out.action.resize(K);
  for (std::size_t k = 0; k < K; ++k) out.action[k] = {fin.sample[k], fin.tau[k], fin.power[k]};
  out.packets = fin.packets;
  return out;
}

}  // namespace aoisched
