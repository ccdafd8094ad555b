#include "aoisched/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "aoisched/scheduler.hpp"

namespace aoisched {

QuadratureRule gauss_laguerre(int n) {
  if (n < 1) throw std::invalid_argument("quadrature needs at least one node");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    J(i, i) = 2.0 * i + 1.0;
    if (i + 1 < n) J(i, i + 1) = J(i + 1, i) = i + 1.0;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  QuadratureRule q;
  for (int i = 0; i < n; ++i) {
    q.nodes.push_back(es.eigenvalues()[i]);
    const double v = es.eigenvectors()(0, i);
    q.weights.push_back(v * v);
  }
  return q;
}

OracleResult oracle_value_iteration(const Model& model, const OracleOptions& options) {
  if (model.sensor_count() != 1) throw std::invalid_argument("the oracle handles single-sensor models only");
  const auto& w = model.weights;
  const auto& ch = model.channel;
  const int L = w.dataVolume[0];
  const int A = w.aMax;
  const std::size_t cells = model.cell_count();
  const std::size_t block = local_block_size(L, A);
  const std::size_t N = block * cells;
  const QuadratureRule quad = gauss_laguerre(options.quadratureNodes);
  const std::size_t nodes = quad.nodes.size();
  const std::size_t work = N * nodes * static_cast<std::size_t>(2 * (L + 1));
  if (work > options.maxWork) throw std::invalid_argument("oracle instance exceeds the size cap");

  // Least energy tau p for d packets over the tau grid, per cell and node;
  // infinity when no grid time meets P_max.
  std::vector<double> energy(cells * nodes * static_cast<std::size_t>(L + 1), std::numeric_limits<double>::infinity());
  auto eidx = [&](std::size_t c, std::size_t i, int d) { return (c * nodes + i) * static_cast<std::size_t>(L + 1) + static_cast<std::size_t>(d); };
  for (std::size_t c = 0; c < cells; ++c) {
    const auto rate = model.links.rate(0, c);
    for (std::size_t i = 0; i < nodes; ++i) {
      const double Y = rate ? quad.nodes[i] / *rate : 0.0;
      energy[eidx(c, i, 0)] = 0.0;
      for (int d = 1; d <= L; ++d) {
        if (!(Y > 0.0)) continue;
        for (int j = 1; j <= options.tauGrid; ++j) {
          const double tau = w.frameSec * j / options.tauGrid;
          const double p = power_from(d, tau, Y, ch);
          if (p <= ch.maxPowerW * (1.0 + 1e-12)) energy[eidx(c, i, d)] = std::min(energy[eidx(c, i, d)], tau * p);
        }
      }
      if (!rate) break;  // every node sees Y = 0
    }
  }

  OracleResult out;
  out.value.assign(N, 0.0);
  std::vector<double> next(N);
  for (int it = 1; it <= options.maxIterations; ++it) {
    double change = 0.0;
    for (std::size_t idx = 0; idx < N; ++idx) {
      const KappaTuple t = inverse_kappa(idx + 1, L, A);
      const std::size_t c = t.cell;
      const bool blocked = !model.links.rate(0, c);
      const double stage = t.local.aoiServer + (t.local.aoiServer == A ? w.wQ : 0.0);
      // Continuation for every (s, d) does not depend on the node.
      double cont[2][16];
      if (L + 1 > 16) throw std::invalid_argument("data volume too large for the oracle");
      for (int s = 0; s <= 1; ++s)
        for (int d = 0; d <= transmit_buffer(t.local, s, L); ++d) {
          const LocalState nl = advance_local(t.local, s, d, L, A, w.drainRule);
          double v = 0.0;
          for (const auto& [to, p] : model.blocker.successors[c])
            v += p * out.value[kappa_index(to, nl, L, A) - 1];
          cont[s][d] = w.wP * s * w.sampleEnergyJ + w.gamma * v;
        }
      double expect = 0.0;
      for (std::size_t i = 0; i < nodes; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (int s = 0; s <= 1; ++s)
          for (int d = 0; d <= transmit_buffer(t.local, s, L); ++d) {
            const double e = energy[eidx(c, blocked ? 0 : i, d)];
            if (std::isinf(e)) continue;
            best = std::min(best, w.wP * e + cont[s][d]);
          }
        expect += quad.weights[i] * best;
        if (blocked) {
          expect = best;
          break;
        }
      }
      next[idx] = stage + expect;
      change = std::max(change, std::abs(next[idx] - out.value[idx]));
    }
    out.value.swap(next);
    out.iterations = it;
    out.lastChange = change;
    if (change <= options.tol) break;
  }
  return out;
}

}  // namespace aoisched
