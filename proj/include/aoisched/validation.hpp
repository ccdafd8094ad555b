#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aoisched/channel.hpp"
#include "aoisched/harness.hpp"
#include "aoisched/model.hpp"
#include "aoisched/random.hpp"
#include "aoisched/reference_policy.hpp"

namespace aoisched::validation {

struct SuiteReport {
  std::string name;
  bool passed = true;
  std::vector<std::string> lines;
  double seconds = 0.0;

  void note(const std::string& line) { lines.push_back(line); }
  void require(bool ok, const std::string& line) {
    passed = passed && ok;
    lines.push_back((ok ? "ok   " : "FAIL ") + line);
  }
};

/// Uniform random abstract state over the full local ranges.
AbstractState random_abstract_state(const Model& model, RandomStream& rng);

/// Two-cell, one-sensor scene (L = 2, A_max = 3) where one cell blocks the LoS.
Model small_oracle_model();

// Time-split oracle built from the stationarity condition alone: nested
// bisection on the multiplier and on each sensor's time, no Lambert W.
struct P23Oracle {
  std::vector<double> tau;
  double nu = 0.0;
  double energy = 0.0;
};

P23Oracle p23_bisection_oracle(const std::vector<int>& packets, const std::vector<double>& gains,
                               const ChannelParams& params, double frameSec);

/// sum_k tau_k p_k(tau_k) in Joules.
double p23_energy(const std::vector<int>& packets, const std::vector<double>& tau, const std::vector<double>& gains,
                  const ChannelParams& params);

/// Largest relative violation of the KKT stationarity/sign conditions at (tau, nu).
double p23_kkt_residual(const std::vector<int>& packets, const std::vector<double>& tau,
                        const std::vector<double>& gains, double nu, const ChannelParams& params);

struct PmfOptions {
  long samples = 1'000'000;
  std::uint64_t seed = 11;
  double maxTv = 0.005;
  double sumTol = 1e-9;
};
SuiteReport pmf_suite(const Model& model, const PmfOptions& options = {});

struct TransitionOptions {
  long frames = 100'000;
  std::uint64_t seed = 12;
  long minVisits = 500;
  double maxTv = 0.02;
};
SuiteReport transitions_suite(const Model& model, const ReferenceTables& tables, const TransitionOptions& options = {});

struct ValueOptions {
  int starts = 10;
  int rollouts = 2000;
  long horizon = 700;
  std::uint64_t seed = 13;
  double maxAbsZ = 3.0;
};
SuiteReport value_suite(const Model& model, const ReferenceTables& tables, const ValueOptions& options = {});

struct TimeSplitOptions {
  int instances = 1000;
  int maxSensors = 8;
  std::uint64_t seed = 14;
  double relObjectiveTol = 1e-6;
  double kktTol = 1e-6;
  double sumTol = 1e-9;
};
SuiteReport time_split_suite(const ChannelParams& params, double frameSec, const TimeSplitOptions& options = {});

struct LambertOptions {
  int gridPoints = 20000;
  double relResidual = 1e-10;
};
SuiteReport lambert_suite(const LambertOptions& options = {});

struct DescentOptions {
  long frames = 10'000;
  std::uint64_t seed = 15;
  double tol = 1e-9;
  double minFractionWithin3 = 0.95;
  double maxMeanMs = 10.0;
};
SuiteReport descent_suite(const Model& model, const ReferenceTables& tables, const DescentOptions& options = {});

struct ChainOptions {
  int starts = 10;
  int rollouts = 300;
  long horizon = 700;
  std::uint64_t seed = 16;
};
SuiteReport chain_suite(const Model& model, const ReferenceTables& tables, const ChainOptions& options = {});

struct OracleSuiteOptions {
  int rollouts = 500;
  long horizon = 700;
  std::uint64_t seed = 17;
};
/// Uses small_oracle_model(); every abstract state is a start state.
SuiteReport oracle_suite(const OracleSuiteOptions& options = {});

}  // namespace aoisched::validation
