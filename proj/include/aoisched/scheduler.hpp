#pragma once

#include <cstddef>
#include <vector>

#include "aoisched/channel.hpp"
#include "aoisched/mdp_core.hpp"
#include "aoisched/model.hpp"
#include "aoisched/reference_policy.hpp"

namespace aoisched {

/// Power that delivers exactly d packets in tau seconds: (2^{d N_b/(tau W)} - 1) / Y.
double power_from(int d, double tauSec, double gainY, const ChannelParams& params);

/// Shortest time for d packets at P_max; infinite when d > 0 and Y = 0.
double min_transmit_time(int d, double gainY, const ChannelParams& params);

struct P23Result {
  std::vector<double> tau;
  double nu = 0.0;        // multiplier of the frame-time equality
  bool feasible = true;   // false: sum of minimum times exceeds the frame
};

/// Energy-minimal time split for fixed packet counts (closed form in W0 with
/// bisection on the multiplier). Sensors with d = 0 get tau = 0.
P23Result solve_p23(const std::vector<int>& packets, const std::vector<double>& gains,
                    const ChannelParams& params, double frameSec);

/// Drops packets one at a time from the sensor with the largest per-packet
/// minimum time until the counts fit in the frame.
std::vector<int> repair_packets(std::vector<int> packets, const std::vector<double>& gains,
                                const ChannelParams& params, double frameSec);

struct SchedulerOptions {
  int maxIters = 50;
  double tol = 1e-9;
};

struct IterationRecord {
  std::vector<int> sample;
  std::vector<int> packets;
  std::vector<double> tau;
  std::vector<double> power;
  double objective = 0.0;
};

/// iterations[0] is the initialization from Pi, iterations[n] the n-th pass.
struct IterationTrace {
  std::vector<IterationRecord> iterations;

  int iteration_count() const { return static_cast<int>(iterations.size()) - 1; }
  /// Last pass that lowered the objective by at least `tol` (0 if none did).
  int last_improvement(double tol) const;
};

struct ScheduleResult {
  Action action;
  std::vector<int> packets;
  IterationTrace trace;
};

/// Per-frame alternating optimization against the reference value tables.
class Scheduler {
 public:
  Scheduler(const Model& model, const ReferenceTables& tables, SchedulerOptions options = {});

  ScheduleResult schedule(const SystemState& state) const;

  /// Sampling decision with departures implied by the previous time and power.
  int solve_p21(const SystemState& state, std::size_t k, double prevTau, double prevPower) const;

  /// Packet count for fixed sampling decision and previous time.
  int solve_p22(const SystemState& state, std::size_t k, int sample, double prevTau) const;

  /// sum over next cells of P^B[l, l'] w_k(l', next).
  double expected_next_value(std::size_t k, std::size_t cell, const LocalState& next) const;

  /// Per-sensor P2 term wP (tau p + s C^s) + gamma E[w_k(next)] with d packets.
  double sensor_objective(const SystemState& state, std::size_t k, const SensorAction& a, int d) const;

  double objective(const SystemState& state, const Action& action, const std::vector<int>& packets) const;

  const SchedulerOptions& options() const { return options_; }

 private:
  const Model& model_;
  const ReferenceTables& tables_;
  SchedulerOptions options_;
  std::vector<double> referenceTimes_;
};

}  // namespace aoisched
