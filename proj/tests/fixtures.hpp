#pragma once

#include "aoisched/config.hpp"
#include "aoisched/model.hpp"
#include "aoisched/reference_policy.hpp"

namespace fixtures {

// Default eight-sensor scene and its tables, built once per test binary.
inline const aoisched::Model& k8() {
  static const aoisched::Model m = aoisched::build_model(aoisched::default_config(8));
  return m;
}

inline const aoisched::ReferenceTables& k8_tables() {
  static const aoisched::ReferenceTables t = aoisched::build_reference_tables(k8());
  return t;
}

// One sensor, two cells, short queues: cheap enough for exhaustive checks.
inline aoisched::Config tiny_config() {
  aoisched::Config c = aoisched::default_config(1);
  c.room.sensors = {{2.0, 10.0}};
  c.blocker.cells = {{6.0, 10.0}, {6.0, 11.0}};
  c.mdp.dataVolume = {2};
  c.mdp.aMax = 3;
  return c;
}

}  // namespace fixtures
