#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "aoisched/config.hpp"
#include "aoisched/experiments.hpp"
#include "aoisched/harness.hpp"
#include "aoisched/policy.hpp"
#include "aoisched/reference_policy.hpp"
#include "aoisched/validation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace aoisched;

namespace {

constexpr int kSchemaVersion = 1;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

json components_json(const CostBreakdown& c) {
  return {{"serverAoi", c.serverAoi},
          {"samplingEnergy", c.samplingEnergy},
          {"transmissionEnergy", c.transmissionEnergy},
          {"outdatedPenalty", c.outdatedPenalty}};
}

SchedulerOptions scheduler_options(const Config& c) {
  SchedulerOptions o;
  o.maxIters = c.policy.maxIters;
  o.tol = c.policy.tol;
  return o;
}

std::optional<ReferenceTables> tables_for(const std::vector<std::string>& policies, const Model& model,
                                          const fs::path& cacheDir) {
  bool need = false;
  for (const auto& p : policies) need = need || policy_needs_tables(p);
  if (!need) return std::nullopt;
  bool hit = false;
  auto t = cached_reference_tables(model, cacheDir, &hit);
  if (!hit) std::cerr << "note: built reference tables into " << cacheDir.string() << "\n";
  return t;
}

int cmd_paths(const Config& config) {
  const Model model = build_model(config);
  std::cout << "sensor,pathIndex,lengthR,aoaPhi,aodTheta,pathLossDb\n";
  for (std::size_t k = 0; k < model.sensor_count(); ++k)
    for (const auto& p : model.links.paths(k))
      std::cout << k << ',' << p.pathIndex << ',' << num(p.lengthR) << ',' << num(p.aoaPhi) << ','
                << num(p.aodTheta) << ',' << num(p.pathLossDb) << '\n';
  return 0;
}

int cmd_value_tables(const Config& config, const fs::path& cacheDir) {
  const Model model = build_model(config);
  const auto start = std::chrono::steady_clock::now();
  bool hit = false;
  const ReferenceTables tables = cached_reference_tables(model, cacheDir, &hit);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json sensors = json::array();
  for (const auto& s : tables.sensors)
    sensors.push_back({{"dataVolume", s.dataVolume},
                       {"dimension", s.dimension()},
                       {"nonZeros", s.P.nonZeros()},
                       {"residual", s.residual}});
  char hash[20];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(tables.hash));
  json out = {{"schemaVersion", kSchemaVersion},
              {"hash", hash},
              {"cacheHit", hit},
              {"seconds", seconds},
              {"constantTerm", tables.constantTerm},
              {"sensors", sensors}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct SimulateArgs {
  std::string policy;
  std::optional<std::uint64_t> seed;
  std::optional<long> frames;
  fs::path out;
  fs::path cacheDir;
  bool trajectory = false;
  bool trace = false;
};

int cmd_simulate(Config config, const SimulateArgs& a) {
  if (!a.policy.empty()) config.policy.name = a.policy;
  if (a.seed) config.sim.seed = *a.seed;
  if (a.frames) config.sim.frames = *a.frames;
  config = resolve(config);
  const Model model = build_model(config);
  const auto tables = tables_for({config.policy.name}, model, a.cacheDir);
  const auto policy = make_policy(config.policy.name, model, tables ? &*tables : nullptr, scheduler_options(config));
  fs::create_directories(a.out);

  const std::size_t K = model.sensor_count();
  std::ofstream episode = open_out(a.out / "episode.csv");
  episode << "frame,cell";
  for (std::size_t k = 0; k < K; ++k)
    for (const char* f : {"queue", "aoiSensor", "aoiServer", "gain", "sample", "tau", "power", "departed"})
      episode << ',' << f << '_' << k;
  episode << ",serverAoi,samplingEnergy,transmissionEnergy,outdatedPenalty,cost\n";
  std::ofstream trajectory, trace;
  if (a.trajectory) {
    trajectory = open_out(a.out / "trajectory.csv");
    trajectory << "frame,cellIndex\n";
  }
  if (a.trace) {
    trace = open_out(a.out / "trace.csv");
    trace << "frame,iteration,objective,sensor,sample,packets,tau,power\n";
  }

  EpisodeOptions eo;
  eo.frames = config.sim.frames;
  eo.seed = config.sim.seed;
  eo.start = cold_start(model, config.blocker.startCell, config.sim.initial);
  eo.keepTraces = a.trace;
  eo.observer = [&](const FrameRecord& r, const IterationTrace* t) {
    episode << r.frame << ',' << r.state.blockerCell;
    for (std::size_t k = 0; k < K; ++k) {
      const auto& l = r.state.sensors[k];
      const auto& act = r.action[k];
      episode << ',' << l.queue << ',' << l.aoiSensor << ',' << l.aoiServer << ',' << num(r.state.gains[k]) << ','
              << act.sample << ',' << num(act.tauSec) << ',' << num(act.powerW) << ',' << r.departed[k];
    }
    episode << ',' << num(r.cost.serverAoi) << ',' << num(r.cost.samplingEnergy) << ','
            << num(r.cost.transmissionEnergy) << ',' << num(r.cost.outdatedPenalty) << ',' << num(r.cost.total())
            << '\n';
    if (a.trajectory) trajectory << r.frame << ',' << r.state.blockerCell << '\n';
    if (a.trace && t)
      for (std::size_t n = 0; n < t->iterations.size(); ++n) {
        const auto& it = t->iterations[n];
        for (std::size_t k = 0; k < K; ++k)
          trace << r.frame << ',' << n << ',' << num(it.objective) << ',' << k << ',' << it.sample[k] << ','
                << it.packets[k] << ',' << num(it.tau[k]) << ',' << num(it.power[k]) << '\n';
      }
  };
  const EpisodeResult res = run_episode(model, *policy, eo);
  const double n = static_cast<double>(res.frames);
  const CostBreakdown mean{res.totals.serverAoi / n, res.totals.samplingEnergy / n, res.totals.transmissionEnergy / n,
                           res.totals.outdatedPenalty / n};
  json summary = {{"schemaVersion", kSchemaVersion},
                  {"policy", config.policy.name},
                  {"seed", config.sim.seed},
                  {"frames", res.frames},
                  {"meanCost", res.mean_cost()},
                  {"components", components_json(mean)},
                  {"discountedCost", res.discounted},
                  {"cdf", {{"grid", config.sim.cdfGrid}, {"values", empirical_cdf(res.costs, config.sim.cdfGrid)}}},
                  {"config", to_json(config)}};
  open_out(a.out / "summary.json") << summary.dump(2) << "\n";
  std::cout << config.policy.name << ": mean per-frame cost " << num(res.mean_cost()) << " over " << res.frames
            << " frames\n";
  return 0;
}

struct CompareArgs {
  std::vector<std::string> policies;
  std::vector<std::uint64_t> seeds;
  std::optional<long> frames;
  fs::path out;
  fs::path cacheDir;
};

std::vector<PolicySummary> run_comparison(const Config& config, const CompareArgs& a) {
  const Model model = build_model(config);
  const auto tables = tables_for(a.policies, model, a.cacheDir);
  ComparisonOptions co;
  co.policies = a.policies;
  co.seeds = a.seeds;
  co.frames = config.sim.frames;
  co.cdfGrid = config.sim.cdfGrid;
  co.startCell = config.blocker.startCell;
  co.initial = config.sim.initial;
  co.scheduler = scheduler_options(config);
  return compare_policies(model, tables ? &*tables : nullptr, co);
}

int cmd_compare(const Config& raw, CompareArgs a) {
  Config config = raw;
  if (a.frames) config.sim.frames = *a.frames;
  if (a.seeds.empty()) a.seeds = {config.sim.seed};
  if (a.policies.empty()) a.policies = {"proposed", "bm1", "bm2", "bm3"};
  const Config resolved = resolve(config);
  fs::create_directories(a.out);

  const auto base = run_comparison(resolved, a);
  std::ofstream cdf = open_out(a.out / "cdf.csv");
  cdf << "policy,cost,cdf\n";
  for (const auto& s : base)
    for (std::size_t i = 0; i < resolved.sim.cdfGrid.size(); ++i)
      cdf << s.name << ',' << num(resolved.sim.cdfGrid[i]) << ',' << num(s.cdf[i]) << '\n';
  std::ofstream comp = open_out(a.out / "components.csv");
  comp << "policy,meanCost,serverAoi,samplingEnergy,transmissionEnergy,outdatedPenalty\n";
  json policies = json::array();
  for (const auto& s : base) {
    const auto& c = s.meanComponents;
    comp << s.name << ',' << num(s.meanCost) << ',' << num(c.serverAoi) << ',' << num(c.samplingEnergy) << ','
         << num(c.transmissionEnergy) << ',' << num(c.outdatedPenalty) << '\n';
    policies.push_back({{"name", s.name},
                        {"frames", s.frames},
                        {"meanCost", s.meanCost},
                        {"components", components_json(c)},
                        {"seedMeans", s.seedMeans},
                        {"cdf", s.cdf}});
  }

  json sweep = json::array();
  if (!config.sim.sweepNumSensors.empty()) {
    std::ofstream byK = open_out(a.out / "cost_vs_k.csv");
    byK << "numSensors,policy,meanCost\n";
    for (std::size_t K : config.sim.sweepNumSensors) {
      const auto rows = K == resolved.room.numSensors ? base : run_comparison(resolve(with_sensor_count(config, K)), a);
      for (const auto& s : rows) {
        byK << K << ',' << s.name << ',' << num(s.meanCost) << '\n';
        sweep.push_back({{"numSensors", K}, {"policy", s.name}, {"meanCost", s.meanCost}});
      }
      std::cerr << "K = " << K << " done\n";
    }
  }

  json out = {{"schemaVersion", kSchemaVersion},
              {"seeds", a.seeds},
              {"frames", resolved.sim.frames},
              {"cdfGrid", resolved.sim.cdfGrid},
              {"policies", policies},
              {"costVsK", sweep},
              {"config", to_json(resolved)}};
  open_out(a.out / "compare.json") << out.dump(2) << "\n";
  for (const auto& s : base) std::cout << s.name << ": mean per-frame cost " << num(s.meanCost) << "\n";
  return 0;
}

int cmd_validate(const Config& config, const std::string& suite, const fs::path& cacheDir) {
  namespace v = validation;
  const std::vector<std::string> all = {"lambert", "lemma3", "pmf", "transitions", "value", "descent", "lemma4", "oracle"};
  std::vector<std::string> run = suite == "all" ? all : std::vector<std::string>{suite};
  std::optional<Model> model;
  std::optional<ReferenceTables> tables;
  auto need_model = [&]() -> const Model& {
    if (!model) model = build_model(config);
    return *model;
  };
  auto need_tables = [&]() -> const ReferenceTables& {
    if (!tables) tables = cached_reference_tables(need_model(), cacheDir);
    return *tables;
  };
  bool ok = true;
  for (const auto& name : run) {
    v::SuiteReport r;
    if (name == "lambert") r = v::lambert_suite();
    else if (name == "lemma3") r = v::time_split_suite(need_model().channel, need_model().weights.frameSec);
    else if (name == "pmf") r = v::pmf_suite(need_model());
    else if (name == "transitions") r = v::transitions_suite(need_model(), need_tables());
    else if (name == "value") r = v::value_suite(need_model(), need_tables());
    else if (name == "descent") r = v::descent_suite(need_model(), need_tables());
    else if (name == "lemma4") r = v::chain_suite(need_model(), need_tables());
    else r = v::oracle_suite();
    for (const auto& line : r.lines) std::cout << "  " << line << "\n";
    std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "\n";
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age-of-information scheduling simulator"};
  app.require_subcommand(1);
  std::string configPath;
  fs::path cacheDir = ".aoisched-cache";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", configPath, "JSON config file")->required();
  };
  auto add_cache = [&](CLI::App* sub) {
    sub->add_option("--cache-dir", cacheDir, "reference table cache directory")->capture_default_str();
  };

  auto* paths = app.add_subcommand("paths", "print the propagation path table as CSV");
  add_common(paths);

  auto* tablesCmd = app.add_subcommand("value-tables", "build or load the reference value tables");
  add_common(tablesCmd);
  add_cache(tablesCmd);

  SimulateArgs sim;
  std::uint64_t simSeed = 0;
  long simFrames = 0;
  auto* simulate = app.add_subcommand("simulate", "run one policy and write episode.csv and summary.json");
  add_common(simulate);
  add_cache(simulate);
  simulate->add_option("--policy", sim.policy, "proposed, psi<N>, bm1, bm2 or bm3");
  auto* seedOpt = simulate->add_option("--seed", simSeed, "master seed");
  auto* framesOpt = simulate->add_option("--frames", simFrames, "frames to simulate")->check(CLI::PositiveNumber);
  simulate->add_option("--out", sim.out, "output directory")->required();
  simulate->add_flag("--trajectory", sim.trajectory, "also write trajectory.csv");
  simulate->add_flag("--trace", sim.trace, "also write per-iteration trace.csv");

  CompareArgs cmp;
  long cmpFrames = 0;
  auto* compare = app.add_subcommand("compare", "run several policies on common random numbers");
  add_common(compare);
  add_cache(compare);
  compare->add_option("--policies", cmp.policies, "policy names")->delimiter(',');
  compare->add_option("--seeds", cmp.seeds, "master seeds")->delimiter(',');
  auto* cmpFramesOpt = compare->add_option("--frames", cmpFrames, "frames per seed")->check(CLI::PositiveNumber);
  compare->add_option("--out", cmp.out, "output directory")->required();

  std::string suite = "all";
  auto* validate = app.add_subcommand("validate", "run a cross-check suite");
  add_common(validate);
  add_cache(validate);
  validate->add_option("--suite", suite, "suite name")
      ->check(CLI::IsMember({"all", "pmf", "transitions", "value", "lemma3", "lemma4", "oracle", "descent", "lambert"}))
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    const Config config = load_config_file(configPath);
    if (*paths) return cmd_paths(config);
    if (*tablesCmd) return cmd_value_tables(config, cacheDir);
    if (*simulate) {
      if (*seedOpt) sim.seed = simSeed;
      if (*framesOpt) sim.frames = simFrames;
      sim.cacheDir = cacheDir;
      return cmd_simulate(config, sim);
    }
    if (*compare) {
      if (*cmpFramesOpt) cmp.frames = cmpFrames;
      cmp.cacheDir = cacheDir;
      return cmd_compare(config, cmp);
    }
    return cmd_validate(resolve(config), suite, cacheDir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
