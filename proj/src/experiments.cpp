#include "aoisched/experiments.hpp"

#include <algorithm>

#include "aoisched/config.hpp"
#include "aoisched/policy.hpp"

namespace aoisched {

std::vector<double> empirical_cdf(std::vector<double> values, const std::vector<double>& grid) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  out.reserve(grid.size());
  for (double g : grid) {
    const auto n = std::upper_bound(values.begin(), values.end(), g) - values.begin();
    out.push_back(values.empty() ? 0.0 : static_cast<double>(n) / static_cast<double>(values.size()));
  }
  return out;
}

std::vector<PolicySummary> compare_policies(const Model& model, const ReferenceTables* tables,
                                            const ComparisonOptions& options) {
  const std::vector<double> grid = options.cdfGrid.empty() ? default_cdf_grid() : options.cdfGrid;
  std::vector<PolicySummary> out;
  for (const auto& name : options.policies) {
    const auto policy = make_policy(name, model, tables, options.scheduler);
    PolicySummary s;
    s.name = name;
    std::vector<double> costs;
    CostBreakdown totals;
    for (std::uint64_t seed : options.seeds) {
      EpisodeOptions eo;
      eo.frames = options.frames;
      eo.seed = seed;
      eo.start = cold_start(model, options.startCell, options.initial);
      EpisodeResult r = run_episode(model, *policy, eo);
      s.seedMeans.push_back(r.mean_cost());
      totals += r.totals;
      costs.insert(costs.end(), r.costs.begin(), r.costs.end());
      s.frames += r.frames;
    }
    const double n = static_cast<double>(s.frames);
    s.meanComponents = {totals.serverAoi / n, totals.samplingEnergy / n, totals.transmissionEnergy / n,
                        totals.outdatedPenalty / n};
    s.meanCost = s.meanComponents.total();
    s.cdf = empirical_cdf(std::move(costs), grid);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace aoisched
