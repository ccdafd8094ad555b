#include "aoisched/config.hpp"

#include <fstream>
#include <sstream>

#include "aoisched/random.hpp"

namespace aoisched {

using nlohmann::json;

namespace {

const std::vector<std::string> kSections = {"room", "blocker", "channel", "mdp", "policy", "sim"};

// Line of the first occurrence of "key" in the source, 0 when absent.
std::size_t line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find('"' + key + '"');
  if (pos == std::string::npos) return 0;
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n'));
}

class Reader {
 public:
  Reader(const std::string& text, std::string source) : text_(text), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& message) const {
    const auto leaf = path.substr(path.find_last_of('.') + 1);
    std::ostringstream os;
    os << source_;
    if (const auto line = line_of_key(text_, leaf); line > 0) os << ":" << line;
    os << ": " << path << ": " << message;
    throw ConfigError(os.str());
  }

  template <class T>
  void get(const json& section, const std::string& sectionName, const char* key, T& out) const {
    const auto it = section.find(key);
    if (it == section.end()) return;
    const std::string path = sectionName + "." + key;
    try {
      out = it->get<T>();
    } catch (const json::exception&) {
      fail(path, "has the wrong type");
    }
  }

  Point point(const json& v, const std::string& path) const {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      fail(path, "expected [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
  }

  std::vector<Point> points(const json& section, const std::string& sectionName, const char* key) const {
    std::vector<Point> out;
    const auto it = section.find(key);
    if (it == section.end()) return out;
    const std::string path = sectionName + "." + key;
    if (!it->is_array()) fail(path, "expected a list of [x, y]");
    for (std::size_t i = 0; i < it->size(); ++i) out.push_back(point((*it)[i], path + "[" + std::to_string(i) + "]"));
    return out;
  }

 private:
  const std::string& text_;
  std::string source_;
};

void check_keys(const Reader& r, const json& section, const std::string& name,
                std::initializer_list<const char*> allowed) {
  for (auto it = section.begin(); it != section.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) r.fail(name + "." + it.key(), "unknown key");
  }
}

}  // namespace

std::vector<double> default_cdf_grid() {
  std::vector<double> g;
  for (int i = 0; i <= 100; ++i) g.push_back(5.0 * i);
  return g;
}

Config default_config(std::size_t numSensors) {
  Config c;
  c.room.numSensors = numSensors;
  return c;
}

Config parse_config(const std::string& text, const std::string& sourceName) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(upto), '\n');
    throw ConfigError(sourceName + ":" + std::to_string(line) + ": malformed JSON: " + e.what());
  }
  Reader r(text, sourceName);
  if (!doc.is_object()) r.fail("<root>", "expected an object");
  if (doc.contains("config") && doc["config"].is_object()) doc = doc["config"];

  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (std::find(kSections.begin(), kSections.end(), it.key()) == kSections.end() && it.key() != "schemaVersion")
      r.fail(it.key(), "unknown section");

  Config c;
  auto section = [&](const char* name) -> json {
    if (!doc.contains(name)) return json::object();
    if (!doc[name].is_object()) r.fail(name, "expected an object");
    return doc[name];
  };

  const json room = section("room");
  check_keys(r, room, "room",
             {"width", "height", "bs", "bsArrayAxis", "numSensors", "sensorInset", "layoutSeed", "sensors",
              "sensorArrayAxes"});
  r.get(room, "room", "width", c.room.width);
  r.get(room, "room", "height", c.room.height);
  if (room.contains("bs")) c.room.bs = r.point(room["bs"], "room.bs");
  r.get(room, "room", "bsArrayAxis", c.room.bsArrayAxis);
  r.get(room, "room", "numSensors", c.room.numSensors);
  r.get(room, "room", "sensorInset", c.room.sensorInset);
  r.get(room, "room", "layoutSeed", c.room.layoutSeed);
  c.room.sensors = r.points(room, "room", "sensors");
  r.get(room, "room", "sensorArrayAxes", c.room.sensorArrayAxes);
  if (c.room.sensors.empty() && c.room.numSensors == 0)
    r.fail("room.numSensors", "missing required key (or give room.sensors)");
  if (!c.room.sensors.empty() && c.room.numSensors != 0 && c.room.numSensors != c.room.sensors.size())
    r.fail("room.numSensors", "disagrees with the length of room.sensors");

  const json blocker = section("blocker");
  check_keys(r, blocker, "blocker",
             {"cells", "ringHalfWidth", "cellSpacing", "stayProbability", "radius", "startCell", "transition"});
  c.blocker.cells = r.points(blocker, "blocker", "cells");
  r.get(blocker, "blocker", "ringHalfWidth", c.blocker.ringHalfWidth);
  r.get(blocker, "blocker", "cellSpacing", c.blocker.cellSpacing);
  r.get(blocker, "blocker", "stayProbability", c.blocker.stayProbability);
  r.get(blocker, "blocker", "radius", c.blocker.radius);
  r.get(blocker, "blocker", "startCell", c.blocker.startCell);
  if (blocker.contains("transition")) {
    const json& t = blocker["transition"];
    if (!t.is_array()) r.fail("blocker.transition", "expected a square matrix");
    for (const auto& row : t) {
      if (!row.is_array()) r.fail("blocker.transition", "expected a square matrix");
      for (const auto& v : row) {
        if (!v.is_number()) r.fail("blocker.transition", "entries must be numbers");
        c.blocker.transition.push_back(v.get<double>());
      }
    }
  }

  const json channel = section("channel");
  check_keys(r, channel, "channel",
             {"carrierGHz", "nR", "nT", "bandwidthHz", "noiseDbmPerHz", "packetBits", "maxPowerW",
              "nlosExtraLossDb"});
  r.get(channel, "channel", "carrierGHz", c.channel.carrierGHz);
  r.get(channel, "channel", "nR", c.channel.nR);
  r.get(channel, "channel", "nT", c.channel.nT);
  r.get(channel, "channel", "bandwidthHz", c.channel.bandwidthHz);
  r.get(channel, "channel", "noiseDbmPerHz", c.channel.noiseDbmPerHz);
  r.get(channel, "channel", "packetBits", c.channel.packetBits);
  r.get(channel, "channel", "maxPowerW", c.channel.maxPowerW);
  r.get(channel, "channel", "nlosExtraLossDb", c.channel.nlosExtraLossDb);

  const json mdp = section("mdp");
  check_keys(r, mdp, "mdp",
             {"frameSec", "aMax", "gamma", "wP", "wQ", "sampleEnergyJ", "referencePowerW", "dataVolume",
              "dataVolumeMin", "dataVolumeMax", "dataVolumeSeed", "drainRule"});
  r.get(mdp, "mdp", "frameSec", c.mdp.frameSec);
  r.get(mdp, "mdp", "aMax", c.mdp.aMax);
  r.get(mdp, "mdp", "gamma", c.mdp.gamma);
  r.get(mdp, "mdp", "wP", c.mdp.wP);
  r.get(mdp, "mdp", "wQ", c.mdp.wQ);
  r.get(mdp, "mdp", "sampleEnergyJ", c.mdp.sampleEnergyJ);
  r.get(mdp, "mdp", "referencePowerW", c.mdp.referencePowerW);
  r.get(mdp, "mdp", "dataVolume", c.mdp.dataVolume);
  r.get(mdp, "mdp", "dataVolumeMin", c.mdp.dataVolumeMin);
  r.get(mdp, "mdp", "dataVolumeMax", c.mdp.dataVolumeMax);
  r.get(mdp, "mdp", "dataVolumeSeed", c.mdp.dataVolumeSeed);
  if (mdp.contains("drainRule")) {
    std::string rule;
    r.get(mdp, "mdp", "drainRule", rule);
    if (rule == "postAction")
      c.mdp.drainRule = DrainRule::PostAction;
    else if (rule == "skipOnSampling")
      c.mdp.drainRule = DrainRule::SkipOnSampling;
    else
      r.fail("mdp.drainRule", "expected \"postAction\" or \"skipOnSampling\"");
  }

  const json policy = section("policy");
  check_keys(r, policy, "policy", {"name", "maxIters", "tol"});
  r.get(policy, "policy", "name", c.policy.name);
  r.get(policy, "policy", "maxIters", c.policy.maxIters);
  r.get(policy, "policy", "tol", c.policy.tol);

  const json sim = section("sim");
  check_keys(r, sim, "sim", {"seed", "frames", "initialQueue", "initialAoiSensor", "initialAoiServer", "cdfGrid",
                             "sweepNumSensors"});
  r.get(sim, "sim", "seed", c.sim.seed);
  r.get(sim, "sim", "frames", c.sim.frames);
  r.get(sim, "sim", "initialQueue", c.sim.initial.queue);
  r.get(sim, "sim", "initialAoiSensor", c.sim.initial.aoiSensor);
  r.get(sim, "sim", "initialAoiServer", c.sim.initial.aoiServer);
  r.get(sim, "sim", "cdfGrid", c.sim.cdfGrid);
  r.get(sim, "sim", "sweepNumSensors", c.sim.sweepNumSensors);

  try {
    return resolve(std::move(c));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(sourceName + ": " + e.what());
  }
}

Config load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

Config resolve(Config c) {
  if (c.room.sensors.empty())
    c.room.sensors = perimeter_sensor_positions(c.room.width, c.room.height, c.room.sensorInset,
                                                c.room.numSensors, c.room.layoutSeed);
  c.room.numSensors = c.room.sensors.size();
  if (c.room.sensorArrayAxes.empty())
    for (const Point& p : c.room.sensors) c.room.sensorArrayAxes.push_back(wall_parallel_axis(p, c.room.width, c.room.height));
  if (c.room.sensorArrayAxes.size() != c.room.numSensors)
    throw ConfigError("room.sensorArrayAxes: needs one entry per sensor");

  if (c.blocker.cells.empty()) c.blocker.cells = ring_cells(c.room.bs, c.blocker.ringHalfWidth, c.blocker.cellSpacing);
  if (c.blocker.startCell >= c.blocker.cells.size()) throw ConfigError("blocker.startCell: out of range");
  if (!c.blocker.transition.empty() && c.blocker.transition.size() != c.blocker.cells.size() * c.blocker.cells.size())
    throw ConfigError("blocker.transition: must be |cells| x |cells|");

  if (c.mdp.dataVolume.empty()) {
    if (c.mdp.dataVolumeMin < 1 || c.mdp.dataVolumeMax < c.mdp.dataVolumeMin)
      throw ConfigError("mdp.dataVolumeMin: invalid data volume range");
    RandomStream rng(c.mdp.dataVolumeSeed, StreamPurpose::DataVolume);
    std::uniform_int_distribution<int> pick(c.mdp.dataVolumeMin, c.mdp.dataVolumeMax);
    for (std::size_t k = 0; k < c.room.numSensors; ++k) c.mdp.dataVolume.push_back(pick(rng.engine()));
  }
  if (c.mdp.dataVolume.size() != c.room.numSensors) throw ConfigError("mdp.dataVolume: needs one entry per sensor");

  const LocalState& s0 = c.sim.initial;
  const int lMin = *std::min_element(c.mdp.dataVolume.begin(), c.mdp.dataVolume.end());
  if (s0.queue < 0 || s0.queue > lMin || s0.aoiSensor < 1 || s0.aoiSensor > c.mdp.aMax || s0.aoiServer < 1 ||
      s0.aoiServer > c.mdp.aMax)
    throw ConfigError("sim.initialQueue: initial state out of range");
  if (c.sim.cdfGrid.empty()) c.sim.cdfGrid = default_cdf_grid();
  if (c.sim.frames < 1) throw ConfigError("sim.frames: must be positive");
  for (std::size_t k : c.sim.sweepNumSensors)
    if (k < 1) throw ConfigError("sim.sweepNumSensors: entries must be positive");
  return c;
}

nlohmann::json to_json(const Config& c) {
  auto pts = [](const std::vector<Point>& v) {
    json a = json::array();
    for (const Point& p : v) a.push_back({p.x, p.y});
    return a;
  };
  json j;
  j["room"] = {{"width", c.room.width},
               {"height", c.room.height},
               {"bs", {c.room.bs.x, c.room.bs.y}},
               {"bsArrayAxis", c.room.bsArrayAxis},
               {"numSensors", c.room.numSensors},
               {"sensorInset", c.room.sensorInset},
               {"layoutSeed", c.room.layoutSeed},
               {"sensors", pts(c.room.sensors)},
               {"sensorArrayAxes", c.room.sensorArrayAxes}};
  j["blocker"] = {{"cells", pts(c.blocker.cells)},
                  {"ringHalfWidth", c.blocker.ringHalfWidth},
                  {"cellSpacing", c.blocker.cellSpacing},
                  {"stayProbability", c.blocker.stayProbability},
                  {"radius", c.blocker.radius},
                  {"startCell", c.blocker.startCell}};
  if (!c.blocker.transition.empty()) {
    const std::size_t n = c.blocker.cells.size();
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i)
      rows.push_back(std::vector<double>(c.blocker.transition.begin() + static_cast<long>(i * n),
                                         c.blocker.transition.begin() + static_cast<long>((i + 1) * n)));
    j["blocker"]["transition"] = rows;
  }
  j["channel"] = {{"carrierGHz", c.channel.carrierGHz},       {"nR", c.channel.nR},
                  {"nT", c.channel.nT},                       {"bandwidthHz", c.channel.bandwidthHz},
                  {"noiseDbmPerHz", c.channel.noiseDbmPerHz}, {"packetBits", c.channel.packetBits},
                  {"maxPowerW", c.channel.maxPowerW},         {"nlosExtraLossDb", c.channel.nlosExtraLossDb}};
  j["mdp"] = {{"frameSec", c.mdp.frameSec},
              {"aMax", c.mdp.aMax},
              {"gamma", c.mdp.gamma},
              {"wP", c.mdp.wP},
              {"wQ", c.mdp.wQ},
              {"sampleEnergyJ", c.mdp.sampleEnergyJ},
              {"referencePowerW", c.mdp.referencePowerW},
              {"dataVolume", c.mdp.dataVolume},
              {"dataVolumeMin", c.mdp.dataVolumeMin},
              {"dataVolumeMax", c.mdp.dataVolumeMax},
              {"dataVolumeSeed", c.mdp.dataVolumeSeed},
              {"drainRule", c.mdp.drainRule == DrainRule::PostAction ? "postAction" : "skipOnSampling"}};
  j["policy"] = {{"name", c.policy.name}, {"maxIters", c.policy.maxIters}, {"tol", c.policy.tol}};
  j["sim"] = {{"seed", c.sim.seed},
              {"frames", c.sim.frames},
              {"initialQueue", c.sim.initial.queue},
              {"initialAoiSensor", c.sim.initial.aoiSensor},
              {"initialAoiServer", c.sim.initial.aoiServer},
              {"cdfGrid", c.sim.cdfGrid},
              {"sweepNumSensors", c.sim.sweepNumSensors}};
  return j;
}

Config with_sensor_count(Config c, std::size_t numSensors) {
  auto fits = [&](auto& v) {
    if (v.size() >= numSensors) {
      v.resize(numSensors);
      return true;
    }
    return false;
  };
  if (!fits(c.room.sensors)) {
    c.room.sensors.clear();
    c.room.sensorArrayAxes.clear();
  } else if (!fits(c.room.sensorArrayAxes)) {
    c.room.sensorArrayAxes.clear();
  }
  if (!fits(c.mdp.dataVolume)) c.mdp.dataVolume.clear();
  c.room.numSensors = numSensors;
  c.sim.sweepNumSensors.clear();
  return c;
}

Model build_model(const Config& raw) {
  const Config c = resolve(raw);
  RoomLayout room;
  room.width = c.room.width;
  room.height = c.room.height;
  room.walls = rectangle_walls(c.room.width, c.room.height);
  room.bsPosition = c.room.bs;
  room.sensorPositions = c.room.sensors;
  room.blockerCells = c.blocker.cells;
  room.bsArrayAxis = c.room.bsArrayAxis;
  room.sensorArrayAxes = c.room.sensorArrayAxes;

  BlockerModel blocker = c.blocker.transition.empty()
                             ? build_random_walk(c.blocker.cells, c.blocker.cellSpacing,
                                                 c.blocker.stayProbability, c.blocker.radius)
                             : from_transition_matrix(c.blocker.cells, c.blocker.transition, c.blocker.radius);

  ChannelParams ch;
  ch.bandwidthHz = c.channel.bandwidthHz;
  ch.noisePsdWPerHz = dbm_per_hz_to_w_per_hz(c.channel.noiseDbmPerHz);
  ch.packetBits = c.channel.packetBits;
  ch.nR = c.channel.nR;
  ch.nT = c.channel.nT;
  ch.maxPowerW = c.channel.maxPowerW;

  CostWeights w;
  w.wP = c.mdp.wP;
  w.wQ = c.mdp.wQ;
  w.sampleEnergyJ = c.mdp.sampleEnergyJ;
  w.aMax = c.mdp.aMax;
  w.gamma = c.mdp.gamma;
  w.frameSec = c.mdp.frameSec;
  w.dataVolume = c.mdp.dataVolume;
  w.drainRule = c.mdp.drainRule;

  try {
    return assemble_model(std::move(room), std::move(blocker), ch, std::move(w), c.channel.carrierGHz,
                          c.channel.nlosExtraLossDb, c.mdp.referencePowerW);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid configuration: ") + e.what());
  }
}

}  // namespace aoisched
