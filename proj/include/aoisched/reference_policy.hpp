#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include <Eigen/Sparse>

#include "aoisched/mdp_core.hpp"
#include "aoisched/model.hpp"

namespace aoisched {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Policy Pi for one sensor: sample when the queue is empty, proportional
/// time share, constant power.
SensorAction reference_action(const Model& model, std::size_t k, const LocalState& local);
Action reference_action(const Model& model, const std::vector<LocalState>& sensors);

/// Local transition block for the current cell, following the four cases of
/// the Pi transition table. Rows and columns use epsilon - 1.
SparseMatrix build_Mk(const Model& model, std::size_t k, std::size_t cell);

/// Full local transition matrix; block (l, l') is P^B[l, l'] M_k^(l).
/// Rows and columns use kappa - 1.
SparseMatrix build_Pk(const Model& model, std::size_t k);

Eigen::VectorXd build_gk(const Model& model, std::size_t k);

struct ValueSolve {
  Eigen::VectorXd w;
  double residual = 0.0;  // ||(I - gamma P) w - g||_inf / max(1, ||g||_inf)
};

/// Solves (I - gamma P) w = g with a sparse LU factorization.
ValueSolve solve_value(const SparseMatrix& P, const Eigen::VectorXd& g, double gamma);

struct SensorTable {
  int dataVolume = 0;
  int aMax = 0;
  std::size_t cellCount = 0;
  SparseMatrix P;
  Eigen::VectorXd g;
  Eigen::VectorXd w;
  double residual = 0.0;

  std::size_t dimension() const { return static_cast<std::size_t>(g.size()); }
  double value(std::size_t cell, const LocalState& local) const {
    return w[static_cast<Eigen::Index>(kappa_index(cell, local, dataVolume, aMax) - 1)];
  }
};

struct ReferenceTables {
  std::vector<SensorTable> sensors;
  double constantTerm = 0.0;  // wP T_F P^Pi / (1 - gamma)
  std::uint64_t hash = 0;

  double local_value(std::size_t k, std::size_t cell, const LocalState& local) const {
    return sensors[k].value(cell, local);
  }
};

SensorTable build_sensor_table(const Model& model, std::size_t k);

/// Builds every sensor's table; independent sensors run concurrently when
/// `threads` > 1.
ReferenceTables build_reference_tables(const Model& model, unsigned threads = 0);

/// Approximate value of an abstract state: sum of local values plus the
/// constant energy term.
double value_of_abstract_state(const ReferenceTables& tables, const AbstractState& state);

void save_tables(const ReferenceTables& tables, const std::filesystem::path& file);

/// Returns the stored tables when the file exists and its hash matches.
std::optional<ReferenceTables> load_tables(const std::filesystem::path& file, std::uint64_t expectedHash);

/// Loads from `cacheDir` or builds and stores. `hit` reports which happened.
ReferenceTables cached_reference_tables(const Model& model, const std::filesystem::path& cacheDir,
                                        bool* hit = nullptr);

}  // namespace aoisched
