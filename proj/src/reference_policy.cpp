#include "aoisched/reference_policy.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <future>
#include <stdexcept>
#include <thread>

#include <Eigen/SparseLU>

#include "aoisched/channel.hpp"

namespace aoisched {

SensorAction reference_action(const Model& model, std::size_t k, const LocalState& local) {
  const auto& w = model.weights;
  double total = 0.0;
  for (int l : w.dataVolume) total += l;
  return {local.queue == 0 ? 1 : 0, w.frameSec * w.dataVolume.at(k) / total, model.referencePowerW};
}

Action reference_action(const Model& model, const std::vector<LocalState>& sensors) {
  Action a;
  a.reserve(sensors.size());
  for (std::size_t k = 0; k < sensors.size(); ++k) a.push_back(reference_action(model, k, sensors[k]));
  return a;
}

SparseMatrix build_Mk(const Model& model, std::size_t k, std::size_t cell) {
  const int L = model.weights.dataVolume.at(k);
  const int A = model.weights.aMax;
  const auto n = static_cast<Eigen::Index>(local_block_size(L, A));
  const double tau = model.reference_times()[k];
  const std::vector<double> pmf = departure_pmf(model.links.rate(k, cell), tau, model.referencePowerW, L, model.channel);
  // tail[d] = Pr[D >= d]
  std::vector<double> tail(static_cast<std::size_t>(L) + 2, 0.0);
  for (int d = L; d >= 0; --d) tail[static_cast<std::size_t>(d)] = tail[static_cast<std::size_t>(d) + 1] + pmf[static_cast<std::size_t>(d)];

  auto idx = [&](int q, int as, int ad) {
    return static_cast<Eigen::Index>(epsilon_index({q, as, ad}, L, A) - 1);
  };
  const bool skip = model.weights.drainRule == DrainRule::SkipOnSampling;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(L + 1));
  for (int q = 0; q <= L; ++q)
    for (int as = 1; as <= A; ++as)
      for (int ad = 1; ad <= A; ++ad) {
        const Eigen::Index row = idx(q, as, ad);
        const int adUp = std::min(ad + 1, A);
        const int asUp = std::min(as + 1, A);
        if (q == 0) {
          // Case 1: the whole new sample departs.
          trip.emplace_back(row, idx(0, 1, skip ? adUp : 1), tail[static_cast<std::size_t>(L)]);
          // Case 2: L - q' packets of the new sample depart.
          for (int qn = 1; qn <= L; ++qn)
            trip.emplace_back(row, idx(qn, 1, adUp), pmf[static_cast<std::size_t>(L - qn)]);
        } else {
          // Case 3: the remaining packets drain.
          trip.emplace_back(row, idx(0, asUp, asUp), tail[static_cast<std::size_t>(q)]);
          // Case 4: q - q' packets depart.
          for (int qn = 1; qn <= q; ++qn)
            trip.emplace_back(row, idx(qn, asUp, adUp), pmf[static_cast<std::size_t>(q - qn)]);
        }
      }
  SparseMatrix M(n, n);
  M.setFromTriplets(trip.begin(), trip.end());
  M.prune(0.0);
  return M;
}

SparseMatrix build_Pk(const Model& model, std::size_t k) {
  const std::size_t cells = model.cell_count();
  const auto n = static_cast<Eigen::Index>(local_block_size(model.weights.dataVolume.at(k), model.weights.aMax));
  const Eigen::Index N = n * static_cast<Eigen::Index>(cells);
  std::vector<Eigen::Triplet<double>> trip;
  for (std::size_t l = 0; l < cells; ++l) {
    const SparseMatrix M = build_Mk(model, k, l);
    const auto rowBase = static_cast<Eigen::Index>(l) * n;
    for (Eigen::Index r = 0; r < M.outerSize(); ++r)
      for (SparseMatrix::InnerIterator it(M, r); it; ++it)
        for (const auto& [to, p] : model.blocker.successors[l])
          trip.emplace_back(rowBase + r, static_cast<Eigen::Index>(to) * n + it.col(), p * it.value());
  }
  SparseMatrix P(N, N);
  P.setFromTriplets(trip.begin(), trip.end());
  return P;
}

Eigen::VectorXd build_gk(const Model& model, std::size_t k) {
  const auto& w = model.weights;
  const int L = w.dataVolume.at(k);
  const std::size_t n = local_block_size(L, w.aMax);
  Eigen::VectorXd g(static_cast<Eigen::Index>(n * model.cell_count()));
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    const KappaTuple t = inverse_kappa(static_cast<std::size_t>(i) + 1, L, w.aMax);
    g[i] = t.local.aoiServer + (t.local.queue == 0 ? w.wP * w.sampleEnergyJ : 0.0) +
           (t.local.aoiServer == w.aMax ? w.wQ : 0.0);
  }
  return g;
}

ValueSolve solve_value(const SparseMatrix& P, const Eigen::VectorXd& g, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
  Eigen::SparseMatrix<double> I(P.rows(), P.cols());
  I.setIdentity();
  const Eigen::SparseMatrix<double> A = I - gamma * Eigen::SparseMatrix<double>(P);
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw std::runtime_error("value system factorization failed");
  ValueSolve out;
  out.w = lu.solve(g);
  if (lu.info() != Eigen::Success) throw std::runtime_error("value system solve failed");
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  out.residual = (A * out.w - g).cwiseAbs().maxCoeff() / scale;
  if (!(out.residual <= 1e-8))
    throw std::runtime_error("value system residual " + std::to_string(out.residual) + " exceeds 1e-8");
  return out;
}

SensorTable build_sensor_table(const Model& model, std::size_t k) {
  SensorTable t;
  t.dataVolume = model.weights.dataVolume.at(k);
  t.aMax = model.weights.aMax;
  t.cellCount = model.cell_count();
  t.P = build_Pk(model, k);
  t.g = build_gk(model, k);
  ValueSolve s = solve_value(t.P, t.g, model.weights.gamma);
  t.w = std::move(s.w);
  t.residual = s.residual;
  return t;
}

ReferenceTables build_reference_tables(const Model& model, unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t K = model.sensor_count();
  ReferenceTables tables;
  tables.sensors.resize(K);
  tables.constantTerm =
      model.weights.wP * model.weights.frameSec * model.referencePowerW / (1.0 - model.weights.gamma);
  tables.hash = table_hash(model);
  if (threads == 1) {
    for (std::size_t k = 0; k < K; ++k) tables.sensors[k] = build_sensor_table(model, k);
    return tables;
  }
  for (std::size_t start = 0; start < K; start += threads) {
    std::vector<std::future<SensorTable>> jobs;
    for (std::size_t k = start; k < std::min(K, start + threads); ++k)
      jobs.push_back(std::async(std::launch::async, [&model, k] { return build_sensor_table(model, k); }));
    for (std::size_t j = 0; j < jobs.size(); ++j) tables.sensors[start + j] = jobs[j].get();
  }
  return tables;
}

double value_of_abstract_state(const ReferenceTables& tables, const AbstractState& state) {
  if (state.sensors.size() != tables.sensors.size())
    throw std::invalid_argument("state has a different sensor count than the tables");
  double v = tables.constantTerm;
  for (std::size_t k = 0; k < state.sensors.size(); ++k) v += tables.local_value(k, state.blockerCell, state.sensors[k]);
  return v;
}

namespace {

constexpr char kMagic[8] = {'A', 'O', 'I', 'T', 'A', 'B', 'L', 'E'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
bool take(std::istream& is, T& v) {
  return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof v));
}

}  // namespace

void save_tables(const ReferenceTables& tables, const std::filesystem::path& file) {
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + tmp);
    os.write(kMagic, sizeof kMagic);
    put(os, kVersion);
    put(os, tables.hash);
    put(os, tables.constantTerm);
    put(os, static_cast<std::uint64_t>(tables.sensors.size()));
    for (const auto& t : tables.sensors) {
      put(os, static_cast<std::int32_t>(t.dataVolume));
      put(os, static_cast<std::int32_t>(t.aMax));
      put(os, static_cast<std::uint64_t>(t.cellCount));
      put(os, t.residual);
      put(os, static_cast<std::uint64_t>(t.dimension()));
      put(os, static_cast<std::uint64_t>(t.P.nonZeros()));
      for (Eigen::Index r = 0; r < t.P.outerSize(); ++r)
        for (SparseMatrix::InnerIterator it(t.P, r); it; ++it) {
          put(os, static_cast<std::uint32_t>(it.row()));
          put(os, static_cast<std::uint32_t>(it.col()));
          put(os, it.value());
        }
      os.write(reinterpret_cast<const char*>(t.g.data()), static_cast<std::streamsize>(sizeof(double) * t.dimension()));
      os.write(reinterpret_cast<const char*>(t.w.data()), static_cast<std::streamsize>(sizeof(double) * t.dimension()));
    }
    if (!os) throw std::runtime_error("failed writing " + tmp);
  }
  std::filesystem::rename(tmp, file);
}

std::optional<ReferenceTables> load_tables(const std::filesystem::path& file, std::uint64_t expectedHash) {
  std::ifstream is(file, std::ios::binary);
  if (!is) return std::nullopt;
  char magic[8];
  std::uint32_t version = 0;
  ReferenceTables tables;
  std::uint64_t count = 0;
  if (!is.read(magic, sizeof magic) || !std::equal(magic, magic + 8, kMagic)) return std::nullopt;
  if (!take(is, version) || version != kVersion) return std::nullopt;
  if (!take(is, tables.hash) || tables.hash != expectedHash) return std::nullopt;
  if (!take(is, tables.constantTerm) || !take(is, count)) return std::nullopt;
  tables.sensors.resize(count);
  for (auto& t : tables.sensors) {
    std::int32_t L = 0, A = 0;
    std::uint64_t cells = 0, dim = 0, nnz = 0;
    if (!take(is, L) || !take(is, A) || !take(is, cells) || !take(is, t.residual) || !take(is, dim) || !take(is, nnz))
      return std::nullopt;
    t.dataVolume = L;
    t.aMax = A;
    t.cellCount = cells;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(nnz);
    for (std::uint64_t i = 0; i < nnz; ++i) {
      std::uint32_t r = 0, c = 0;
      double v = 0.0;
      if (!take(is, r) || !take(is, c) || !take(is, v)) return std::nullopt;
      trip.emplace_back(r, c, v);
    }
    t.P.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    t.P.setFromTriplets(trip.begin(), trip.end());
    t.g.resize(static_cast<Eigen::Index>(dim));
    t.w.resize(static_cast<Eigen::Index>(dim));
    if (!is.read(reinterpret_cast<char*>(t.g.data()), static_cast<std::streamsize>(sizeof(double) * dim)) ||
        !is.read(reinterpret_cast<char*>(t.w.data()), static_cast<std::streamsize>(sizeof(double) * dim)))
      return std::nullopt;
  }
  return tables;
}

ReferenceTables cached_reference_tables(const Model& model, const std::filesystem::path& cacheDir, bool* hit) {
  const std::uint64_t h = table_hash(model);
  char name[64];
  std::snprintf(name, sizeof name, "tables-%016llx.bin", static_cast<unsigned long long>(h));
  const auto file = cacheDir / name;
  if (auto cached = load_tables(file, h)) {
    if (hit) *hit = true;
    return std::move(*cached);
  }
  if (hit) *hit = false;
  ReferenceTables tables = build_reference_tables(model);
  std::filesystem::create_directories(cacheDir);
  save_tables(tables, file);
  return tables;
}

}  // namespace aoisched
