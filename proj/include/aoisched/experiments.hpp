#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aoisched/harness.hpp"
#include "aoisched/model.hpp"
#include "aoisched/reference_policy.hpp"
#include "aoisched/scheduler.hpp"

namespace aoisched {

struct ComparisonOptions {
  std::vector<std::string> policies{"proposed", "bm1", "bm2", "bm3"};
  std::vector<std::uint64_t> seeds{1};
  long frames = 100000;
  std::vector<double> cdfGrid;
  std::size_t startCell = 0;
  LocalState initial{0, 1, 1};
  SchedulerOptions scheduler;
};

struct PolicySummary {
  std::string name;
  long frames = 0;
  double meanCost = 0.0;
  CostBreakdown meanComponents;
  std::vector<double> seedMeans;
  std::vector<double> cdf;  // fraction of frames with cost <= grid point
};

/// Runs every policy on every seed; a given seed gives every policy the
/// same blocker path and fading draws. Output follows the requested order.
std::vector<PolicySummary> compare_policies(const Model& model, const ReferenceTables* tables,
                                            const ComparisonOptions& options);

/// Empirical CDF of `values` at each grid point.
std::vector<double> empirical_cdf(std::vector<double> values, const std::vector<double>& grid);

}  // namespace aoisched
