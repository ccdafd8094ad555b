#pragma once

#include "aoisched/mdp_core.hpp"
#include "aoisched/model.hpp"

namespace aoisched {

/// Reference policy applied to every sensor; ignores gains and blocker.
Action bm1(const SystemState& state, const Model& model);

/// Serve sensors in decreasing server AoI, each for the time that drains its
/// buffer at P^Pi, until the frame is used up.
Action bm2(const SystemState& state, const Model& model);

/// Dynamic backpressure: serve in decreasing queue x capacity; sensors with a
/// zero product are skipped.
Action bm3(const SystemState& state, const Model& model);

}  // namespace aoisched
