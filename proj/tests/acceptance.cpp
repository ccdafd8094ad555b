// Runs the twelve acceptance criteria and prints one PASS/FAIL line each.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aoisched/config.hpp"
#include "aoisched/experiments.hpp"
#include "aoisched/reference_policy.hpp"
#include "aoisched/validation.hpp"

using namespace aoisched;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

bool verbose = false;

Outcome from_suite(const validation::SuiteReport& rep, double limitSec) {
  if (verbose)
    for (const auto& l : rep.lines) std::printf("    %s\n", l.c_str());
  std::string first;
  for (const auto& l : rep.lines)
    if (l.rfind("FAIL ", 0) == 0) {
      first = l.substr(5);
      break;
    }
  if (first.empty())
    for (const auto& l : rep.lines)
      if (l.rfind("ok   ", 0) == 0) first = l.substr(5);
  const bool fast = rep.seconds < limitSec;
  return {rep.passed && fast, first + fmt("; %.1f s (limit %.0f s)", rep.seconds, limitSec)};
}

const PolicySummary& find(const std::vector<PolicySummary>& all, const std::string& name) {
  for (const auto& s : all)
    if (s.name == name) return s;
  throw std::logic_error("missing policy " + name);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::set<int> only;
  long cmpFrames = 100000, sweepFrames = 20000;
  int seeds = 10;
  app.add_option("--only", only, "criteria to run (default all)")->check(CLI::Range(1, 12));
  app.add_option("--frames", cmpFrames, "frames per seed for the K=8 comparison");
  app.add_option("--sweep-frames", sweepFrames, "frames per seed for the K sweep");
  app.add_option("--seeds", seeds, "seeds per comparison");
  app.add_flag("-v,--verbose", verbose, "print suite details");
  CLI11_PARSE(app, argc, argv);

  Stopwatch total;
  const Model model = build_model(default_config(8));
  Stopwatch tableClock;
  const ReferenceTables tables = build_reference_tables(model);
  const double tableSec = tableClock.seconds();

  std::vector<std::uint64_t> seedList;
  for (int s = 1; s <= seeds; ++s) seedList.push_back(static_cast<std::uint64_t>(s));

  // comparison shared by criteria 9, 11 and 12
  std::vector<PolicySummary> k8;
  double k8ProposedSec = 0.0;
  auto k8_comparison = [&]() -> const std::vector<PolicySummary>& {
    if (!k8.empty()) return k8;
    ComparisonOptions o;
    o.seeds = seedList;
    o.frames = cmpFrames;
    for (const auto& name : o.policies) {
      ComparisonOptions one = o;
      one.policies = {name};
      Stopwatch c;
      k8.push_back(compare_policies(model, &tables, one).front());
      if (name == "proposed") k8ProposedSec = c.seconds();
    }
    return k8;
  };

  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"departure pmf", [&] { return from_suite(validation::pmf_suite(model), 60); }},
      {"reference transitions", [&] { return from_suite(validation::transitions_suite(model, tables), 120); }},
      {"reference value vs monte carlo", [&] { return from_suite(validation::value_suite(model, tables), 300); }},
      {"time split vs convex oracle",
       [&] { return from_suite(validation::time_split_suite(model.channel, model.weights.frameSec), 60); }},
      {"lambert w", [&] { return from_suite(validation::lambert_suite(), 60); }},
      {"descent of the alternating updates",
       [&] { return from_suite(validation::descent_suite(model, tables), 600); }},
      {"iteration chain ordering", [&] { return from_suite(validation::chain_suite(model, tables), 600); }},
      {"small-instance oracle sandwich", [&] { return from_suite(validation::oracle_suite(), 300); }},
      {"K=8 cost comparison",
       [&] {
         Stopwatch c;
         const auto& all = k8_comparison();
         const double ours = find(all, "proposed").meanCost;
         bool ok = true;
         std::string d;
         for (const auto& s : all) {
           d += fmt("%s %.2f ", s.name.c_str(), s.meanCost);
           if (s.name != "proposed") ok = ok && ours < s.meanCost;
         }
         const double cut = 1.0 - ours / find(all, "bm1").meanCost;
         ok = ok && cut >= 0.25;
         const double sec = c.seconds();
         return Outcome{ok && sec < 1800,
                        d + fmt("; reduction vs bm1 %.1f%% (need 25%%); %.0f s (limit 1800 s)", 100 * cut, sec)};
       }},
      {"cost vs number of sensors",
       [&] {
         Stopwatch c;
         bool ok = true;
         std::string d;
         const Config base = default_config(8);
         for (std::size_t K = 4; K <= 8; ++K) {
           const Model m = build_model(with_sensor_count(base, K));
           const ReferenceTables t = build_reference_tables(m);
           ComparisonOptions o;
           o.seeds = seedList;
           o.frames = sweepFrames;
           const auto all = compare_policies(m, &t, o);
           const double ours = find(all, "proposed").meanCost;
           double best = 1e300;
           for (const auto& s : all)
             if (s.name != "proposed") best = std::min(best, s.meanCost);
           ok = ok && ours <= best;
           d += fmt("K=%zu %.2f/%.2f ", K, ours, best);
         }
         const double sec = c.seconds();
         return Outcome{ok && sec < 3600, d + fmt("(proposed/best benchmark); %.0f s (limit 3600 s)", sec)};
       }},
      {"cost decomposition",
       [&] {
         const auto& all = k8_comparison();
         std::string outdated, sampling;
         double maxOut = -1, maxSmp = -1;
         std::string d;
         for (const auto& s : all) {
           d += fmt("%s %.2f/%.2f ", s.name.c_str(), s.meanComponents.outdatedPenalty,
                    s.meanComponents.samplingEnergy);
           if (s.meanComponents.outdatedPenalty > maxOut) maxOut = s.meanComponents.outdatedPenalty, outdated = s.name;
           if (s.meanComponents.samplingEnergy > maxSmp) maxSmp = s.meanComponents.samplingEnergy, sampling = s.name;
         }
         return Outcome{outdated == "bm1" && sampling == "bm3",
                        d + "(outdated/sampling); largest outdated " + outdated + ", largest sampling " + sampling};
       }},
      {"table build and per-frame time",
       [&] {
         const auto& all = k8_comparison();
         const double frames = static_cast<double>(find(all, "proposed").frames);
         const double ms = 1e3 * k8ProposedSec / frames;
         std::size_t dim = 0;
         for (const auto& s : tables.sensors) dim = std::max(dim, s.dimension());
         return Outcome{tableSec < 300 && ms < 10,
                        fmt("tables %.1f s (limit 300 s, max dimension %zu); %.3f ms per simulated frame (limit 10 ms)",
                            tableSec, dim, ms)};
       }},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(n)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.passed;
    std::printf("%s criterion %2d (%s): %s\n", o.passed ? "PASS" : "FAIL", n, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d failed; total %.0f s\n", failures, total.seconds());
  return failures ? 1 : 0;
}
