#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "aoisched/geometry.hpp"
#include "aoisched/random.hpp"

namespace aoisched {

struct ChannelParams {
  double bandwidthHz = 4e8;
  double noisePsdWPerHz = 3.981071705534985e-21;  // -174 dBm/Hz
  double packetBits = 1.6e6;
  int nR = 64;
  int nT = 128;
  double maxPowerW = 0.1;

  double noise_power() const { return noisePsdWPerHz * bandwidthHz; }
  void validate() const;
};

double dbm_per_hz_to_w_per_hz(double dbmPerHz);

using ComplexVector = std::vector<std::complex<double>>;

/// Normalized half-wavelength ULA response: entry m is exp(-j pi m sin(angle)) / sqrt(n).
ComplexVector array_response(int n, double angle);

/// Codebook angle arcsin(2 (index - 1) / n - 1) for a 1-based index.
double codebook_angle(int index, int n);

/// Path maximizing B_i / rho_i; smallest index on ties, none when all blocked.
std::optional<std::size_t> select_beam(std::span<const PropagationPath> paths,
                                       std::span<const int> blockIndicators);

struct BeamChoice {
  int combinerIndex = 1;  // 1-based codebook index q
  int precoderIndex = 1;  // 1-based codebook index p
  double expectedGain = 0.0;
  bool allBlocked = false;
};

/// Exhaustive codebook search maximizing the expected beamformed path power
/// sum_i B_i rho_i^{-1} |a_R(phi_q)^H a_R(phi_i)|^2 |a_T(theta_p)^H a_T(theta_i)|^2.
BeamChoice expected_beam_gain_search(std::span<const PropagationPath> paths,
                                     std::span<const int> blockIndicators, int nR, int nT);

/// Rate of the exponential baseband-gain law on a path: rho * N0 * W.
double gain_rate(const PropagationPath& path, const ChannelParams& params);

/// Large-array baseband gain: zero when nothing is selected, otherwise
/// Exponential(rho_{i*} N0 W).
double sample_baseband_gain(std::optional<std::size_t> selected,
                            std::span<const PropagationPath> paths, const ChannelParams& params,
                            RandomStream& rng);

/// W log2(1 + p Y) in bit/s.
double capacity(double powerW, double gainY, const ChannelParams& params);

/// floor(capacity * tau / N_b). A relative slack of 1e-9 packets absorbs the
/// rounding of rates computed as exact inverses of a packet count.
int departures(double tauSec, double powerW, double gainY, const ChannelParams& params);

/// Departure-count PMF for Exponential(gainRate) fading at fixed (tau, power).
/// Entries 0..dMax-1 are point masses, entry dMax is Pr[D >= dMax]. A missing
/// rate (all paths blocked) gives a unit mass at 0.
std::vector<double> departure_pmf(std::optional<double> gainRate, double tauSec, double powerW,
                                  int dMax, const ChannelParams& params);

/// Pr[D >= d] for the same law.
double departure_tail(std::optional<double> gainRate, double tauSec, double powerW, int d,
                      const ChannelParams& params);

/// Per-sensor paths and, for every blocker cell, the blockage indicators and
/// the selected beam with its gain-law rate.
class LinkTable {
 public:
  struct Link {
    std::optional<std::size_t> selectedPath;  // position in paths(k)
    double gainRate = 0.0;                    // rho N0 W, 0 when blocked
    std::vector<int> indicators;
  };

  LinkTable() = default;
  LinkTable(const RoomLayout& room, double blockerRadius, const ChannelParams& params,
            double carrierGHz, double nlosExtraLossDb);

  std::size_t sensor_count() const { return paths_.size(); }
  std::size_t cell_count() const { return cellCount_; }
  const std::vector<PropagationPath>& paths(std::size_t k) const { return paths_.at(k); }
  const Link& at(std::size_t k, std::size_t cell) const { return links_.at(k * cellCount_ + cell); }
  std::optional<double> rate(std::size_t k, std::size_t cell) const {
    const Link& l = at(k, cell);
    return l.selectedPath ? std::optional<double>(l.gainRate) : std::nullopt;
  }

 private:
  std::size_t cellCount_ = 0;
  std::vector<std::vector<PropagationPath>> paths_;
  std::vector<Link> links_;
};

struct FiniteChannelRealization {
  std::size_t sensorIndex = 0;
  int nR = 0;
  int nT = 0;
  ComplexVector matrixH;  // row-major nR x nT; empty unless assembled
  ComplexVector pathGains;
  BeamChoice beams;
  double gainY = 0.0;
};

/// Finite-array channel for one (sensor, cell) pair with the codebook beams
/// fixed by the expected-gain search. Used only for validation.
class FiniteArrayChannel {
 public:
  FiniteArrayChannel(const LinkTable& links, std::size_t k, std::size_t cell,
                     const ChannelParams& params);

  const BeamChoice& beams() const { return beams_; }

  /// Draws path gains and returns the realization; the N_R x N_T matrix is
  /// filled only when `assembleMatrix` is set.
  FiniteChannelRealization sample(RandomStream& rng, bool assembleMatrix = false) const;

  /// Gain only, for bulk Monte-Carlo.
  double sample_gain(RandomStream& rng) const;

 private:
  std::size_t k_;
  ChannelParams params_;
  std::vector<PropagationPath> paths_;
  std::vector<int> indicators_;
  BeamChoice beams_;
  ComplexVector coupling_;  // B_i (w^H a_R(phi_i)) (a_T(theta_i)^H f)
};

FiniteChannelRealization finite_array_sample(const LinkTable& links, std::size_t k,
                                             std::size_t cell, const ChannelParams& params,
                                             RandomStream& rng);

}  // namespace aoisched
