#include "aoisched/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

#include "aoisched/config.hpp"
#include "aoisched/lambert_w.hpp"
#include "aoisched/oracle.hpp"
#include "aoisched/policy.hpp"
#include "aoisched/scheduler.hpp"

namespace aoisched::validation {

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int uniform_int(RandomStream& rng, int lo, int hi) {
  return lo + static_cast<int>(std::floor(rng.uniform() * (hi - lo + 1)));
}

// Slope of tau -> tau p(tau) for d packets; x = d N_b ln2 / (W tau).
double energy_slope(int d, double tau, double Y, const ChannelParams& params) {
  const double x = d * params.packetBits * std::numbers::ln2 / (params.bandwidthHz * tau);
  if (x > 700.0) return -std::numeric_limits<double>::infinity();
  return (std::expm1(x) - x * std::exp(x)) / Y;
}

// Time at which the slope equals -nu, never below minT.
double time_for_multiplier(int d, double Y, double nu, double minT, const ChannelParams& params) {
  if (energy_slope(d, minT, Y, params) >= -nu) return minT;
  double lo = minT, hi = std::max(2.0 * minT, 1e-12);
  while (energy_slope(d, hi, Y, params) < -nu) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (energy_slope(d, mid, Y, params) < -nu ? lo : hi) = mid;
  }
  return hi;
}

double tv_distance(const SparseMatrix& a, const SparseMatrix& b, Eigen::Index row) {
  std::vector<std::pair<Eigen::Index, double>> diff;
  for (SparseMatrix::InnerIterator it(a, row); it; ++it) diff.emplace_back(it.col(), it.value());
  for (SparseMatrix::InnerIterator it(b, row); it; ++it) diff.emplace_back(it.col(), -it.value());
  std::sort(diff.begin(), diff.end());
  double tv = 0.0;
  for (std::size_t i = 0; i < diff.size();) {
    double v = 0.0;
    std::size_t j = i;
    for (; j < diff.size() && diff[j].first == diff[i].first; ++j) v += diff[j].second;
    tv += std::abs(v);
    i = j;
  }
  return 0.5 * tv;
}

// Pearson statistic of observed counts against row probabilities, with bins
// under 5 expected counts merged. Returns {statistic, degrees of freedom}.
std::pair<double, int> chi_square(const std::map<std::size_t, long>& observed, const SparseMatrix& P,
                                  Eigen::Index row, long n) {
  // bins with expected count < 5 are pooled, and a pool that is still under
  // 5 joins the smallest regular bin
  std::vector<std::pair<double, double>> bins;  // expected, observed
  double smallExp = 0.0, smallObs = 0.0;
  for (SparseMatrix::InnerIterator it(P, row); it; ++it) {
    const double e = it.value() * n;
    const auto o = observed.find(static_cast<std::size_t>(it.col()));
    const double obs = o == observed.end() ? 0.0 : static_cast<double>(o->second);
    if (e < 5.0) {
      smallExp += e;
      smallObs += obs;
    } else {
      bins.push_back({e, obs});
    }
  }
  if (smallExp >= 5.0 || bins.empty()) {
    bins.push_back({smallExp, smallObs});
  } else if (smallExp > 0.0) {
    auto& b = *std::min_element(bins.begin(), bins.end());
    b.first += smallExp;
    b.second += smallObs;
  }
  double stat = 0.0;
  for (const auto& [e, o] : bins)
    if (e > 0.0) stat += (o - e) * (o - e) / e;
  return {stat, std::max(1, static_cast<int>(bins.size()) - 1)};
}

// Upper tail of chi-square via the Wilson-Hilferty cube-root normal approximation.
double chi_square_upper_tail(double stat, int dof) {
  const double k = dof;
  const double z = (std::cbrt(stat / k) - (1.0 - 2.0 / (9.0 * k))) / std::sqrt(2.0 / (9.0 * k));
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

std::vector<AbstractState> start_states(const Model& model, int n, std::uint64_t seed) {
  RandomStream rng(seed, StreamPurpose::StartState);
  std::vector<AbstractState> out;
  for (int i = 0; i < n; ++i) out.push_back(random_abstract_state(model, rng));
  return out;
}

std::string describe(const AbstractState& z) {
  std::string s = "cell " + std::to_string(z.blockerCell) + " [";
  for (std::size_t k = 0; k < z.sensors.size(); ++k) {
    const auto& l = z.sensors[k];
    s += (k ? " " : "") + fmt("(%d,%d,%d)", l.queue, l.aoiSensor, l.aoiServer);
  }
  return s + "]";
}

}  // namespace

AbstractState random_abstract_state(const Model& model, RandomStream& rng) {
  const auto& w = model.weights;
  AbstractState z;
  z.blockerCell = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(model.cell_count()) - 1));
  for (std::size_t k = 0; k < model.sensor_count(); ++k) {
    LocalState l;
    l.queue = uniform_int(rng, 0, w.dataVolume[k]);
    l.aoiSensor = uniform_int(rng, 1, w.aMax);
    l.aoiServer = uniform_int(rng, 1, w.aMax);
    z.sensors.push_back(l);
  }
  return z;
}

Model small_oracle_model() {
  Config c = default_config(1);
  c.room.sensors = {{2.0, 10.0}};
  c.blocker.cells = {{6.0, 10.0}, {6.0, 11.0}};
  c.mdp.dataVolume = {2};
  c.mdp.aMax = 3;
  return build_model(c);
}

double p23_energy(const std::vector<int>& packets, const std::vector<double>& tau, const std::vector<double>& gains,
                  const ChannelParams& params) {
  double e = 0.0;
  for (std::size_t k = 0; k < packets.size(); ++k)
    if (packets[k] > 0) e += tau[k] * power_from(packets[k], tau[k], gains[k], params);
  return e;
}

P23Oracle p23_bisection_oracle(const std::vector<int>& packets, const std::vector<double>& gains,
                               const ChannelParams& params, double frameSec) {
  const std::size_t K = packets.size();
  std::vector<double> minT(K, 0.0);
  double minSum = 0.0;
  bool any = false;
  for (std::size_t k = 0; k < K; ++k) {
    if (packets[k] == 0) continue;
    any = true;
    minT[k] = min_transmit_time(packets[k], gains[k], params);
    minSum += minT[k];
  }
  if (!(minSum <= frameSec)) throw std::domain_error("time split infeasible");
  P23Oracle out;
  out.tau.assign(K, 0.0);
  if (!any) return out;

  auto times = [&](double nu, std::vector<double>& t) {
    double sum = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      t[k] = packets[k] ? time_for_multiplier(packets[k], gains[k], nu, minT[k], params) : 0.0;
      sum += t[k];
    }
    return sum;
  };
  std::vector<double> t(K);
  double hi = 1.0;
  while (times(hi, t) > frameSec) hi *= 2.0;
  double lo = hi;
  while (lo > 1e-300 && times(lo, t) <= frameSec) lo *= 0.5;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (times(mid, t) > frameSec ? lo : hi) = mid;
  }
  times(hi, out.tau);
  out.nu = hi;
  out.energy = p23_energy(packets, out.tau, gains, params);
  return out;
}

double p23_kkt_residual(const std::vector<int>& packets, const std::vector<double>& tau,
                        const std::vector<double>& gains, double nu, const ChannelParams& params) {
  double worst = 0.0;
  for (std::size_t k = 0; k < packets.size(); ++k) {
    if (packets[k] == 0) continue;
    if (!(nu > 0.0)) return std::numeric_limits<double>::infinity();
    const double minT = min_transmit_time(packets[k], gains[k], params);
    const double g = energy_slope(packets[k], tau[k], gains[k], params) + nu;
    const double r = tau[k] > minT * (1.0 + 1e-9) ? std::abs(g) / nu : std::max(0.0, -g) / nu;
    worst = std::max(worst, r);
  }
  return worst;
}

SuiteReport pmf_suite(const Model& model, const PmfOptions& options) {
  Stopwatch clock;
  SuiteReport rep;
  rep.name = "pmf";
  const auto times = model.reference_times();
  double worstTv = 0.0, worstSum = 0.0;
  for (std::size_t k = 0; k < model.sensor_count(); ++k) {
    const int L = model.weights.dataVolume[k];
    for (std::size_t c = 0; c < model.cell_count(); ++c) {
      const auto rate = model.links.rate(k, c);
      const auto pmf = departure_pmf(rate, times[k], model.referencePowerW, L, model.channel);
      double sum = 0.0;
      for (double p : pmf) sum += p;
      RandomStream rng(options.seed, StreamPurpose::Validation, k * model.cell_count() + c);
      std::vector<long> hist(static_cast<std::size_t>(L) + 1, 0);
      for (long i = 0; i < options.samples; ++i) {
        const double e = rng.exponential();
        const double Y = rate ? e / *rate : 0.0;
        ++hist[static_cast<std::size_t>(std::min(departures(times[k], model.referencePowerW, Y, model.channel), L))];
      }
      double tv = 0.0;
      for (int d = 0; d <= L; ++d)
        tv += std::abs(pmf[static_cast<std::size_t>(d)] - static_cast<double>(hist[static_cast<std::size_t>(d)]) / options.samples);
      tv *= 0.5;
      worstTv = std::max(worstTv, tv);
      worstSum = std::max(worstSum, std::abs(sum - 1.0));
      if (tv >= options.maxTv || std::abs(sum - 1.0) > options.sumTol)
        rep.require(false, fmt("sensor %zu cell %zu: tv %.5f sum-1 %.2e", k, c, tv, sum - 1.0));
    }
  }
  rep.require(worstTv < options.maxTv, fmt("max tv %.5f over %zu x %zu (limit %.4f, %ld samples)", worstTv,
                                           model.sensor_count(), model.cell_count(), options.maxTv, options.samples));
  rep.require(worstSum <= options.sumTol, fmt("max |sum - 1| %.2e (limit %.0e)", worstSum, options.sumTol));
  rep.seconds = clock.seconds();
  return rep;
}

SuiteReport transitions_suite(const Model& model, const ReferenceTables& tables, const TransitionOptions& options) {
  Stopwatch clock;
  SuiteReport rep;
  rep.name = "transitions";
  const TransitionCounts counts = empirical_transitions(model, options.frames, options.seed);
  long rows = 0, offSupport = 0;
  double worst = 0.0, worstExpected = 0.0, minTail = 1.0;
  for (std::size_t k = 0; k < model.sensor_count(); ++k) {
    const auto& table = tables.sensors[k];
    const SparseMatrix emp = counts.row_normalized(k, table.dimension());
    for (const auto& [row, cols] : counts.perSensor[k]) {
      for (const auto& [col, n] : cols)
        if (table.P.coeff(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) == 0.0) ++offSupport;
      if (counts.visits(k, row) < options.minVisits) continue;
      ++rows;
      const long n = counts.visits(k, row);
      const auto r = static_cast<Eigen::Index>(row);
      const double tv = tv_distance(emp, table.P, r);
      // Mean TV of an n-draw multinomial from this row, normal approximation.
      double expected = 0.0;
      for (SparseMatrix::InnerIterator it(table.P, r); it; ++it)
        expected += std::sqrt(2.0 * it.value() * (1.0 - it.value()) / (std::numbers::pi * n));
      expected *= 0.5;
      const auto [stat, dof] = chi_square(cols, table.P, r, n);
      const double tail = chi_square_upper_tail(stat, dof);
      worst = std::max(worst, tv);
      worstExpected = std::max(worstExpected, expected);
      minTail = std::min(minTail, tail);
      rep.note(fmt("sensor %zu row %zu: %ld visits, tv %.4f (sampling-noise mean %.4f), chi2 %.1f on %d dof, p %.3f",
                   k, row, n, tv, expected, stat, dof, tail));
    }
  }
  rep.require(rows > 0, fmt("%ld rows with >= %ld visits (%ld frames)", rows, options.minVisits, options.frames));
  rep.require(worst < options.maxTv, fmt("max row tv %.4f (limit %.3f)", worst, options.maxTv));
  rep.require(offSupport == 0, fmt("%ld observed transitions outside the support of P_k", offSupport));
  rep.note(fmt("largest sampling-noise mean tv %.4f; smallest chi-square p %.4f over %ld rows (%.4f after Bonferroni)",
               worstExpected, minTail, rows, std::min(1.0, minTail * static_cast<double>(rows))));
  rep.seconds = clock.seconds();
  return rep;
}

SuiteReport value_suite(const Model& model, const ReferenceTables& tables, const ValueOptions& options) {
  Stopwatch clock;
  SuiteReport rep;
  rep.name = "value";
  const auto reference = make_policy("bm1", model, nullptr);
  const auto starts = start_states(model, options.starts, options.seed);
  double worstZ = 0.0;
  int inside = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const double analytic = value_of_abstract_state(tables, starts[i]);
    const MonteCarloResult mc =
        monte_carlo_value(model, *reference, starts[i], options.rollouts, options.horizon, options.seed + 1 + i);
    const double z = (analytic - mc.mean) / mc.stdError;
    const bool in = analytic >= mc.lower() && analytic <= mc.upper();
    inside += in;
    worstZ = std::max(worstZ, std::abs(z));
    rep.note(fmt("start %zu %s: analytic %.4f mc %.4f +- %.4f z %+.2f%s", i, describe(starts[i]).c_str(), analytic,
                 mc.mean, mc.halfWidth, z, in ? "" : " (outside 95% CI)"));
  }
  rep.require(worstZ < options.maxAbsZ, fmt("max |z| %.3f (limit %.1f)", worstZ, options.maxAbsZ));
  rep.require(inside == options.starts,
              fmt("%d of %d analytic values inside the 95%% CI", inside, options.starts));
  rep.seconds = clock.seconds();
  return rep;
}

SuiteReport time_split_suite(const ChannelParams& params, double frameSec, const TimeSplitOptions& options) {
  Stopwatch clock;
  SuiteReport rep;
  rep.name = "lemma3";
  RandomStream rng(options.seed, StreamPurpose::Validation);
  double worstGap = 0.0, worstKkt = 0.0, worstSum = 0.0;
  int infeasible = 0, repairFailures = 0, solved = 0;
  for (int n = 0; n < options.instances; ++n) {
    const int K = uniform_int(rng, 1, options.maxSensors);
    std::vector<int> d(static_cast<std::size_t>(K));
    std::vector<double> Y(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
      d[static_cast<std::size_t>(k)] = uniform_int(rng, 0, 5);
      Y[static_cast<std::size_t>(k)] = std::pow(10.0, 4.0 * rng.uniform());
    }
    P23Result closed = solve_p23(d, Y, params, frameSec);
    if (!closed.feasible) {
      ++infeasible;
      d = repair_packets(d, Y, params, frameSec);
      closed = solve_p23(d, Y, params, frameSec);
      if (!closed.feasible) {
        ++repairFailures;
        continue;
      }
      for (int k = 0; k < K; ++k) {
        const auto i = static_cast<std::size_t>(k);
        if (d[i] > 0 && power_from(d[i], closed.tau[i], Y[i], params) > params.maxPowerW * (1.0 + 1e-9)) {
          ++repairFailures;
          break;
        }
      }
    }
    ++solved;
    const P23Oracle oracle = p23_bisection_oracle(d, Y, params, frameSec);
    const double e = p23_energy(d, closed.tau, Y, params);
    const double gap = oracle.energy > 0.0 ? std::abs(e - oracle.energy) / oracle.energy : std::abs(e);
    worstGap = std::max(worstGap, gap);
    worstKkt = std::max(worstKkt, p23_kkt_residual(d, closed.tau, Y, closed.nu, params));
    if (std::any_of(d.begin(), d.end(), [](int x) { return x > 0; })) {
      double sum = 0.0;
      for (double t : closed.tau) sum += t;
      worstSum = std::max(worstSum, std::abs(sum - frameSec) / frameSec);
    }
  }
  rep.note(fmt("%d instances, %d infeasible before repair", options.instances, infeasible));
  rep.require(repairFailures == 0, fmt("%d instances left infeasible after repair", repairFailures));
  rep.require(worstGap <= options.relObjectiveTol,
              fmt("max relative energy gap vs bisection oracle %.3e (limit %.0e)", worstGap, options.relObjectiveTol));
  rep.require(worstKkt < options.kktTol, fmt("max KKT residual %.3e (limit %.0e)", worstKkt, options.kktTol));
  rep.require(worstSum <= options.sumTol,
              fmt("max |sum tau - T_F| / T_F %.3e (limit %.0e)", worstSum, options.sumTol));
  rep.note(fmt("%d instances checked", solved));
  rep.seconds = clock.seconds();
  return rep;
}

SuiteReport lambert_suite(const LambertOptions& options) {
  Stopwatch clock;
  SuiteReport rep;
  rep.name = "lambert";
  const double branch = -std::exp(-1.0);
  std::vector<double> xs;
  const int half = options.gridPoints / 2;
  // Negative side crowds toward the branch point, positive side is log spaced.
  for (int i = 0; i <= half; ++i) xs.push_back(branch * (1.0 - std::pow(10.0, -16.0 * i / half)));
  for (int i = 0; i <= half; ++i) xs.push_back(std::pow(10.0, -12.0 + 18.0 * i / half));
  double worst = 0.0, worstX = 0.0;
  for (double x : xs) {
    const double w = lambert_w0(x);
    const double r = std::abs(w * std::exp(w) - x) / std::max(1.0, std::abs(x));
    if (r > worst) {
      worst = r;
      worstX = x;
    }
  }
  rep.require(worst <= options.relResidual,
              fmt("max scaled residual %.3e at x = %.6g over %zu points (limit %.0e)", worst, worstX, xs.size(),
                  options.relResidual));
  const double eps = std::numeric_limits<double>::epsilon();
  const double atBranch = lambert_w0(branch), atZero = lambert_w0(0.0), atE = lambert_w0(std::numbers::e);
  rep.require(std::abs(atBranch + 1.0) <= 4 * eps, fmt("W(-1/e) = %.17g", atBranch));
  rep.require(atZero == 0.0, fmt("W(0) = %.17g", atZero));
  rep.require(std::abs(atE - 1.0) <= 4 * eps, fmt("W(e) = %.17g", atE));
  rep.seconds = clock.seconds();
  return rep;
}

SuiteReport descent_suite(const Model& model, const ReferenceTables& tables, const DescentOptions& options) {
  Stopwatch clock;
  SuiteReport rep;
  rep.name = "descent";
  SchedulerOptions so;
  so.tol = options.tol;
  const auto policy = make_policy("proposed", model, &tables, so);
  long frames = 0, within3 = 0, increases = 0, maxIters = 0, closeAfter3 = 0;
  double worstRise = 0.0, worstGap3 = 0.0;
  std::map<int, long> passes;
  EpisodeOptions eo;
  eo.frames = options.frames;
  eo.seed = options.seed;
  eo.start = cold_start(model, 0);
  eo.keepCosts = false;
  eo.keepTraces = true;
  eo.observer = [&](const FrameRecord&, const IterationTrace* trace) {
    if (!trace) return;
    ++frames;
    const auto& it = trace->iterations;
    for (std::size_t n = 1; n < it.size(); ++n) {
      const double rise = it[n].objective - it[n - 1].objective;
      worstRise = std::max(worstRise, rise);
      if (rise > 1e-9) ++increases;
    }
    if (trace->last_improvement(options.tol) <= 3) ++within3;
    maxIters = std::max<long>(maxIters, trace->iteration_count());
    ++passes[trace->iteration_count()];
    if (it.size() > 4) {
      const double gap = (it[3].objective - it.back().objective) / std::abs(it.back().objective);
      worstGap3 = std::max(worstGap3, gap);
      closeAfter3 += gap <= 1e-3;
    } else {
      ++closeAfter3;
    }
  };
  Stopwatch run;
  run_episode(model, *policy, eo);
  const double msPerFrame = 1e3 * run.seconds() / std::max<long>(1, options.frames);
  const double frac = frames ? static_cast<double>(within3) / frames : 0.0;
  rep.require(frames == options.frames, fmt("%ld of %ld frames traced", frames, options.frames));
  rep.require(increases == 0, fmt("%ld objective increases above 1e-9 (largest rise %.3e)", increases, worstRise));
  rep.require(frac >= options.minFractionWithin3,
              fmt("%.4f of frames converge within 3 passes (limit %.2f); longest run %ld passes", frac,
                  options.minFractionWithin3, maxIters));
  std::string hist = "passes per frame:";
  for (const auto& [n, c] : passes) hist += fmt(" %d:%ld", n, c);
  rep.note(hist);
  rep.note(fmt("%.4f of frames within 1e-3 relative of the final objective after 3 passes; largest gap %.3e",
               frames ? static_cast<double>(closeAfter3) / frames : 0.0, worstGap3));
  rep.require(msPerFrame < options.maxMeanMs,
              fmt("%.3f ms per frame including simulation (limit %.1f)", msPerFrame, options.maxMeanMs));
  rep.seconds = clock.seconds();
  return rep;
}

SuiteReport chain_suite(const Model& model, const ReferenceTables& tables, const ChainOptions& options) {
  Stopwatch clock;
  SuiteReport rep;
  rep.name = "lemma4";
  const std::vector<std::string> chain = {"bm1", "psi1", "psi2", "psi3"};
  std::vector<std::unique_ptr<Policy>> policies;
  for (const auto& n : chain) policies.push_back(make_policy(n, model, &tables));
  const auto starts = start_states(model, options.starts, options.seed);
  int strict = 0, overlap = 0, violations = 0;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    std::vector<MonteCarloResult> mc;
    for (const auto& p : policies)
      mc.push_back(monte_carlo_value(model, *p, starts[i], options.rollouts, options.horizon, options.seed + 1 + i));
    std::string line = fmt("start %zu:", i);
    for (std::size_t j = 0; j < mc.size(); ++j)
      line += fmt(" %s %.3f+-%.3f", chain[j].c_str(), mc[j].mean, mc[j].halfWidth);
    rep.note(line);
    for (std::size_t j = 1; j < mc.size(); ++j) {
      if (mc[j].mean <= mc[j - 1].mean) {
        ++strict;
      } else if (mc[j].lower() <= mc[j - 1].upper()) {
        ++overlap;
      } else {
        ++violations;
        rep.note(fmt("  %s above %s with disjoint CIs", chain[j].c_str(), chain[j - 1].c_str()));
      }
    }
  }
  rep.note(fmt("%d ordered pairs, %d reversals within overlapping CIs", strict, overlap));
  rep.require(violations == 0, fmt("%d reversals with disjoint CIs (%d starts, %d rollouts, horizon %ld)", violations,
                                   options.starts, options.rollouts, options.horizon));
  rep.seconds = clock.seconds();
  return rep;
}

SuiteReport oracle_suite(const OracleSuiteOptions& options) {
  Stopwatch clock;
  SuiteReport rep;
  rep.name = "oracle";
  const Model model = small_oracle_model();
  const ReferenceTables tables = build_reference_tables(model, 1);
  const OracleResult oracle = oracle_value_iteration(model);
  rep.note(fmt("value iteration: %d sweeps, last change %.2e", oracle.iterations, oracle.lastChange));
  const auto proposed = make_policy("proposed", model, &tables);
  const auto reference = make_policy("bm1", model, nullptr);
  const int L = model.weights.dataVolume[0];
  const int A = model.weights.aMax;
  int states = 0, lowerFails = 0, upperFails = 0;
  for (std::size_t c = 0; c < model.cell_count(); ++c)
    for (int q = 0; q <= L; ++q)
      for (int as = 1; as <= A; ++as)
        for (int ad = 1; ad <= A; ++ad) {
          AbstractState z{c, {LocalState{q, as, ad}}};
          const double v = oracle.at(model, c, z.sensors[0]);
          const auto seed = options.seed + static_cast<std::uint64_t>(states);
          const auto psi = monte_carlo_value(model, *proposed, z, options.rollouts, options.horizon, seed);
          const auto pi = monte_carlo_value(model, *reference, z, options.rollouts, options.horizon, seed);
          const bool lowerOk = v <= psi.upper();
          const bool upperOk = psi.upper() <= pi.upper();
          lowerFails += !lowerOk;
          upperFails += !upperOk;
          if (!lowerOk || !upperOk)
            rep.note(fmt("%s: oracle %.4f psi %.4f+-%.4f pi %.4f+-%.4f", describe(z).c_str(), v, psi.mean,
                         psi.halfWidth, pi.mean, pi.halfWidth));
          ++states;
        }
  rep.require(lowerFails == 0, fmt("oracle <= MC(proposed) + CI at %d of %d states", states - lowerFails, states));
  rep.require(upperFails == 0,
              fmt("MC(proposed) + CI <= MC(reference) + CI at %d of %d states", states - upperFails, states));
  rep.seconds = clock.seconds();
  return rep;
}

}  // namespace aoisched::validation
