#include "aoisched/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace aoisched {

void ChannelParams::validate() const {
  if (!(bandwidthHz > 0.0) || !(noisePsdWPerHz > 0.0) || !(packetBits > 0.0) || !(maxPowerW > 0.0))
    throw std::invalid_argument("channel parameters must be strictly positive");
  if (nR < 1 || nT < 1) throw std::invalid_argument("antenna counts must be at least 1");
}

double dbm_per_hz_to_w_per_hz(double dbmPerHz) { return std::pow(10.0, (dbmPerHz - 30.0) / 10.0); }

ComplexVector array_response(int n, double angle) {
  if (n < 1) throw std::invalid_argument("array needs at least one element");
  ComplexVector a(static_cast<std::size_t>(n));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double phase = -std::numbers::pi * std::sin(angle);
  for (int m = 0; m < n; ++m) a[static_cast<std::size_t>(m)] = std::polar(scale, phase * m);
  return a;
}

double codebook_angle(int index, int n) {
  return std::asin(2.0 * static_cast<double>(index - 1) / static_cast<double>(n) - 1.0);
}

std::optional<std::size_t> select_beam(std::span<const PropagationPath> paths,
                                       std::span<const int> blockIndicators) {
  if (paths.size() != blockIndicators.size())
    throw std::invalid_argument("indicator list must align with paths");
  std::optional<std::size_t> best;
  double bestGain = 0.0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (blockIndicators[i] == 0) continue;
    const double g = 1.0 / paths[i].pathLossLinear;
    if (!best || g > bestGain) {
      best = i;
      bestGain = g;
    }
  }
  return best;
}

namespace {

double array_gain(const ComplexVector& beam, const ComplexVector& response) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t m = 0; m < beam.size(); ++m) acc += std::conj(beam[m]) * response[m];
  return std::norm(acc);
}

}  // namespace

BeamChoice expected_beam_gain_search(std::span<const PropagationPath> paths,
                                     std::span<const int> blockIndicators, int nR, int nT) {
  if (nR < 1 || nT < 1) throw std::invalid_argument("antenna counts must be at least 1");
  if (paths.size() != blockIndicators.size())
    throw std::invalid_argument("indicator list must align with paths");

  BeamChoice choice;
  std::vector<std::size_t> live;
  for (std::size_t i = 0; i < paths.size(); ++i)
    if (blockIndicators[i] != 0) live.push_back(i);
  if (live.empty()) {
    choice.allBlocked = true;
    return choice;
  }

  // Factor tables: gR[q][j] and gT[p][j] for every live path j.
  std::vector<std::vector<double>> gR(static_cast<std::size_t>(nR)), gT(static_cast<std::size_t>(nT));
  std::vector<ComplexVector> aR, aT;
  for (std::size_t i : live) {
    aR.push_back(array_response(nR, paths[i].aoaPhi));
    aT.push_back(array_response(nT, paths[i].aodTheta));
  }
  for (int q = 1; q <= nR; ++q) {
    const ComplexVector w = array_response(nR, codebook_angle(q, nR));
    for (const auto& r : aR) gR[static_cast<std::size_t>(q - 1)].push_back(array_gain(w, r));
  }
  for (int p = 1; p <= nT; ++p) {
    const ComplexVector f = array_response(nT, codebook_angle(p, nT));
    for (const auto& t : aT) gT[static_cast<std::size_t>(p - 1)].push_back(array_gain(f, t));
  }

  choice.expectedGain = -1.0;
  for (int q = 1; q <= nR; ++q) {
    for (int p = 1; p <= nT; ++p) {
      double g = 0.0;
      for (std::size_t j = 0; j < live.size(); ++j)
        g += gR[static_cast<std::size_t>(q - 1)][j] * gT[static_cast<std::size_t>(p - 1)][j] /
             paths[live[j]].pathLossLinear;
      if (g > choice.expectedGain) {
        choice.expectedGain = g;
        choice.combinerIndex = q;
        choice.precoderIndex = p;
      }
    }
  }
  return choice;
}

double gain_rate(const PropagationPath& path, const ChannelParams& params) {
  return path.pathLossLinear * params.noise_power();
}

double sample_baseband_gain(std::optional<std::size_t> selected,
                            std::span<const PropagationPath> paths, const ChannelParams& params,
                            RandomStream& rng) {
  if (!selected) return 0.0;
  return rng.exponential() / gain_rate(paths[*selected], params);
}

double capacity(double powerW, double gainY, const ChannelParams& params) {
  return params.bandwidthHz * std::log2(1.0 + powerW * gainY);
}

int departures(double tauSec, double powerW, double gainY, const ChannelParams& params) {
  if (tauSec <= 0.0 || powerW <= 0.0 || gainY <= 0.0) return 0;
  const double packets = capacity(powerW, gainY, params) * tauSec / params.packetBits;
  return static_cast<int>(std::floor(packets + 1e-9));
}

double departure_tail(std::optional<double> gainRate, double tauSec, double powerW, int d,
                      const ChannelParams& params) {
  if (d <= 0) return 1.0;
  if (!gainRate) return 0.0;
  const double threshold =
      std::expm1(std::log(2.0) * d * params.packetBits / (params.bandwidthHz * tauSec)) / powerW;
  return std::exp(-*gainRate * threshold);
}

std::vector<double> departure_pmf(std::optional<double> gainRate, double tauSec, double powerW,
                                  int dMax, const ChannelParams& params) {
  if (dMax < 0) throw std::invalid_argument("dMax must be nonnegative");
  std::vector<double> pmf(static_cast<std::size_t>(dMax) + 1, 0.0);
  if (!gainRate) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (!(tauSec > 0.0) || !(powerW > 0.0))
    throw std::invalid_argument("departure PMF needs positive time and power");
  for (int d = 0; d < dMax; ++d)
    pmf[static_cast<std::size_t>(d)] = departure_tail(gainRate, tauSec, powerW, d, params) -
                                       departure_tail(gainRate, tauSec, powerW, d + 1, params);
  pmf[static_cast<std::size_t>(dMax)] = departure_tail(gainRate, tauSec, powerW, dMax, params);
  return pmf;
}

LinkTable::LinkTable(const RoomLayout& room, double blockerRadius, const ChannelParams& params,
                     double carrierGHz, double nlosExtraLossDb)
    : cellCount_(room.cell_count()) {
  const std::size_t K = room.sensor_count();
  paths_.reserve(K);
  links_.reserve(K * cellCount_);
  for (std::size_t k = 0; k < K; ++k) {
    paths_.push_back(build_paths(room, k, carrierGHz, nlosExtraLossDb));
    const auto& ps = paths_.back();
    for (std::size_t cell = 0; cell < cellCount_; ++cell) {
      Link link;
      link.indicators.reserve(ps.size());
      for (const auto& path : ps) link.indicators.push_back(blockage_indicator(room, cell, path, blockerRadius));
      link.selectedPath = select_beam(ps, link.indicators);
      if (link.selectedPath) link.gainRate = gain_rate(ps[*link.selectedPath], params);
      links_.push_back(std::move(link));
    }
  }
}

FiniteArrayChannel::FiniteArrayChannel(const LinkTable& links, std::size_t k, std::size_t cell,
                                       const ChannelParams& params)
    : k_(k), params_(params), paths_(links.paths(k)), indicators_(links.at(k, cell).indicators) {
  beams_ = expected_beam_gain_search(paths_, indicators_, params.nR, params.nT);
  coupling_.assign(paths_.size(), {0.0, 0.0});
  if (beams_.allBlocked) return;
  const ComplexVector w = array_response(params.nR, codebook_angle(beams_.combinerIndex, params.nR));
  const ComplexVector f = array_response(params.nT, codebook_angle(beams_.precoderIndex, params.nT));
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    if (indicators_[i] == 0) continue;
    const ComplexVector aR = array_response(params.nR, paths_[i].aoaPhi);
    const ComplexVector aT = array_response(params.nT, paths_[i].aodTheta);
    std::complex<double> wa{0.0, 0.0}, af{0.0, 0.0};
    for (std::size_t m = 0; m < aR.size(); ++m) wa += std::conj(w[m]) * aR[m];
    for (std::size_t m = 0; m < aT.size(); ++m) af += std::conj(aT[m]) * f[m];
    coupling_[i] = wa * af;
  }
}

double FiniteArrayChannel::sample_gain(RandomStream& rng) const {
  std::complex<double> y{0.0, 0.0};
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    const double sigma = std::sqrt(0.5 / paths_[i].pathLossLinear);
    const std::complex<double> alpha{sigma * rng.normal(), sigma * rng.normal()};
    y += alpha * coupling_[i];
  }
  return std::norm(y) / params_.noise_power();
}

FiniteChannelRealization FiniteArrayChannel::sample(RandomStream& rng, bool assembleMatrix) const {
  FiniteChannelRealization out;
  out.sensorIndex = k_;
  out.nR = params_.nR;
  out.nT = params_.nT;
  out.beams = beams_;
  out.pathGains.reserve(paths_.size());
  std::complex<double> y{0.0, 0.0};
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    const double sigma = std::sqrt(0.5 / paths_[i].pathLossLinear);
    const std::complex<double> alpha{sigma * rng.normal(), sigma * rng.normal()};
    out.pathGains.push_back(alpha);
    y += alpha * coupling_[i];
  }
  out.gainY = std::norm(y) / params_.noise_power();

  if (assembleMatrix) {
    const auto nr = static_cast<std::size_t>(params_.nR);
    const auto nt = static_cast<std::size_t>(params_.nT);
    out.matrixH.assign(nr * nt, {0.0, 0.0});
    for (std::size_t i = 0; i < paths_.size(); ++i) {
      if (indicators_[i] == 0) continue;
      const ComplexVector aR = array_response(params_.nR, paths_[i].aoaPhi);
      const ComplexVector aT = array_response(params_.nT, paths_[i].aodTheta);
      for (std::size_t r = 0; r < nr; ++r)
        for (std::size_t c = 0; c < nt; ++c) out.matrixH[r * nt + c] += out.pathGains[i] * aR[r] * std::conj(aT[c]);
    }
  }
  return out;
}

FiniteChannelRealization finite_array_sample(const LinkTable& links, std::size_t k,
                                             std::size_t cell, const ChannelParams& params,
                                             RandomStream& rng) {
  return FiniteArrayChannel(links, k, cell, params).sample(rng, true);
}

}  // namespace aoisched
