#pragma once

#include <memory>
#include <string>
#include <vector>

#include "aoisched/mdp_core.hpp"
#include "aoisched/model.hpp"
#include "aoisched/reference_policy.hpp"
#include "aoisched/scheduler.hpp"

namespace aoisched {

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string name() const = 0;
  /// Must be safe to call concurrently. `trace` is filled only by policies
  /// that iterate.
  virtual Action act(const SystemState& state, IterationTrace* trace = nullptr) const = 0;
};

/// Names accepted by make_policy.
const std::vector<std::string>& policy_names();

bool policy_needs_tables(const std::string& name);

/// "proposed" runs to convergence (options.maxIters), "psiN" stops after N
/// passes, "bm1".."bm3" are the benchmarks. `tables` may be null for
/// benchmarks. Throws std::invalid_argument for unknown names.
std::unique_ptr<Policy> make_policy(const std::string& name, const Model& model, const ReferenceTables* tables,
                                    SchedulerOptions options = {});

}  // namespace aoisched
