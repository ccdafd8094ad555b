#include "aoisched/policy.hpp"

#include <stdexcept>

#include "aoisched/benchmarks.hpp"

namespace aoisched {

namespace {

class ProposedPolicy final : public Policy {
 public:
  ProposedPolicy(std::string name, const Model& model, const ReferenceTables& tables, SchedulerOptions options)
      : name_(std::move(name)), scheduler_(model, tables, options) {}

  std::string name() const override { return name_; }

  Action act(const SystemState& state, IterationTrace* trace) const override {
    ScheduleResult r = scheduler_.schedule(state);
    if (trace) *trace = std::move(r.trace);
    return std::move(r.action);
  }

 private:
  std::string name_;
  Scheduler scheduler_;
};

class BenchmarkPolicy final : public Policy {
 public:
  using Fn = Action (*)(const SystemState&, const Model&);
  BenchmarkPolicy(std::string name, const Model& model, Fn fn) : name_(std::move(name)), model_(model), fn_(fn) {}

  std::string name() const override { return name_; }
  Action act(const SystemState& state, IterationTrace*) const override { return fn_(state, model_); }

 private:
  std::string name_;
  const Model& model_;
  Fn fn_;
};

}  // namespace

const std::vector<std::string>& policy_names() {
  static const std::vector<std::string> names = {"proposed", "psi1", "psi2", "psi3", "bm1", "bm2", "bm3"};
  return names;
}

bool policy_needs_tables(const std::string& name) { return name == "proposed" || name.starts_with("psi"); }

std::unique_ptr<Policy> make_policy(const std::string& name, const Model& model, const ReferenceTables* tables,
                                    SchedulerOptions options) {
  if (name == "bm1") return std::make_unique<BenchmarkPolicy>(name, model, &bm1);
  if (name == "bm2") return std::make_unique<BenchmarkPolicy>(name, model, &bm2);
  if (name == "bm3") return std::make_unique<BenchmarkPolicy>(name, model, &bm3);
  if (policy_needs_tables(name)) {
    if (!tables) throw std::invalid_argument("policy " + name + " needs reference tables");
    if (name != "proposed") {
      const std::string digits = name.substr(3);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("unknown policy " + name);
      options.maxIters = std::stoi(digits);
    }
    return std::make_unique<ProposedPolicy>(name, model, *tables, options);
  }
  throw std::invalid_argument("unknown policy " + name);
}

}  // namespace aoisched
