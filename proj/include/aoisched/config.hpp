#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "aoisched/model.hpp"

namespace aoisched {

/// Raised for malformed or inconsistent configuration. `what()` names the
/// offending key path and, when it can be located, the source line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Config {
  struct Room {
    double width = 20.0;
    double height = 20.0;
    Point bs{10.0, 10.0};
    double bsArrayAxis = 0.0;
    std::size_t numSensors = 0;
    double sensorInset = 1.0;
    std::uint64_t layoutSeed = 1;
    std::vector<Point> sensors;  // explicit positions override the generated layout
    std::vector<double> sensorArrayAxes;
  } room;

  struct Blocker {
    std::vector<Point> cells;  // empty: square ring around the BS
    int ringHalfWidth = 3;
    double cellSpacing = 1.0;
    double stayProbability = 0.9;
    double radius = 0.3;
    std::size_t startCell = 0;
    std::vector<double> transition;  // optional row-major override
  } blocker;

  struct Channel {
    double carrierGHz = 60.0;
    int nR = 64;
    int nT = 128;
    double bandwidthHz = 4e8;
    double noiseDbmPerHz = -174.0;
    double packetBits = 1.6e6;  // 200 KB, 1 KB = 1000 bytes
    double maxPowerW = 0.1;
    double nlosExtraLossDb = 15.0;
  } channel;

  struct Mdp {
    double frameSec = 0.01;
    int aMax = 10;
    double gamma = 0.98;
    double wP = 1e4;
    double wQ = 100.0;
    double sampleEnergyJ = 1e-4;
    double referencePowerW = 0.05;
    std::vector<int> dataVolume;  // empty: drawn from U{min, max}
    int dataVolumeMin = 3;
    int dataVolumeMax = 5;
    std::uint64_t dataVolumeSeed = 1;
    DrainRule drainRule = DrainRule::PostAction;
  } mdp;

  struct Policy {
    std::string name = "proposed";
    int maxIters = 50;
    double tol = 1e-9;
  } policy;

  struct Sim {
    std::uint64_t seed = 1;
    long frames = 100000;
    LocalState initial{0, 1, 1};
    std::vector<double> cdfGrid;  // empty: 0, 5, ..., 500
    std::vector<std::size_t> sweepNumSensors;  // compare repeats for each K listed
  } sim;
};

/// Table-default configuration with `numSensors` sensors.
Config default_config(std::size_t numSensors);

/// Parses a config document. A summary document holding the resolved config
/// under "config" is accepted as well.
Config parse_config(const std::string& text, const std::string& sourceName = "<config>");
Config load_config_file(const std::filesystem::path& path);

/// Fills every derived list (sensor positions, axes, cells, data volumes) so
/// the result no longer depends on layout seeds.
Config resolve(Config config);

nlohmann::json to_json(const Config& config);

Model build_model(const Config& config);

/// Same scenario with `numSensors` sensors: explicit per-sensor lists are
/// truncated when long enough, otherwise regenerated from their seeds.
Config with_sensor_count(Config config, std::size_t numSensors);

std::vector<double> default_cdf_grid();

}  // namespace aoisched
