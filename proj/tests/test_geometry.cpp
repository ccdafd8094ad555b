#include <doctest.h>

#include <cmath>

#include "aoisched/geometry.hpp"

using namespace aoisched;

namespace {

RoomLayout room_with(Point sensor) {
  RoomLayout r;
  r.walls = rectangle_walls(20.0, 20.0);
  r.bsPosition = {10.0, 10.0};
  r.sensorPositions = {sensor};
  r.sensorArrayAxes = {0.0};
  r.blockerCells = {{5.0, 5.0}};
  return r;
}

}  // namespace

TEST_CASE("los length is the straight-line distance") {
  const auto paths = build_paths(room_with({10.0, 0.0}), 0, 60.0, 15.0);
  REQUIRE(!paths.empty());
  CHECK(paths[0].is_los());
  CHECK(paths[0].lengthR == doctest::Approx(10.0));
}

TEST_CASE("los path loss at one metre") {
  CHECK(los_path_loss_db(60.0, 1.0) == doctest::Approx(32.5 + 20.0 * std::log10(60.0)));
  CHECK(los_path_loss_db(60.0, 1.0) == doctest::Approx(68.063).epsilon(1e-4));
}

TEST_CASE("bottom-wall reflection by the image method") {
  const auto paths = build_paths(room_with({0.0, 10.0}), 0, 60.0, 15.0);
  const PropagationPath* bottom = nullptr;
  for (const auto& p : paths)
    if (!p.is_los() && std::abs(p.segments[0].b.y) < 1e-12) bottom = &p;
  REQUIRE(bottom != nullptr);
  CHECK(bottom->segments[0].b.x == doctest::Approx(5.0));
  CHECK(bottom->lengthR == doctest::Approx(2.0 * std::sqrt(125.0)));
  CHECK(bottom->pathLossDb == doctest::Approx(los_path_loss_db(60.0, bottom->lengthR) + 15.0));

  // brute-force search along the wall for the shortest sensor-wall-BS route
  double best = 1e9, bestX = 0.0;
  for (int i = 0; i <= 200000; ++i) {
    const double x = 20.0 * i / 200000;
    const double len = distance({0.0, 10.0}, {x, 0.0}) + distance({x, 0.0}, {10.0, 10.0});
    if (len < best) {
      best = len;
      bestX = x;
    }
  }
  CHECK(bottom->lengthR == doctest::Approx(best).epsilon(1e-9));
  CHECK(bottom->segments[0].b.x == doctest::Approx(bestX).epsilon(1e-3));
}

TEST_CASE("reflections obey equal angles on every wall") {
  const auto paths = build_paths(room_with({3.0, 7.0}), 0, 60.0, 15.0);
  CHECK(paths.size() == 5);
  for (const auto& p : paths) {
    if (p.is_los()) continue;
    const Point hit = p.segments[0].b;
    const Segment wall = rectangle_walls(20.0, 20.0)[p.pathIndex - 1];
    const Point t = wall.b - wall.a;
    const Point in = hit - p.segments[0].a, out = p.segments[1].b - hit;
    CHECK(dot(in, t) / norm(in) == doctest::Approx(dot(out, t) / norm(out)));
  }
}

TEST_CASE("point to segment distance") {
  const Segment s{{0.0, 0.0}, {2.0, 0.0}};
  CHECK(point_segment_distance({1.0, 1.0}, s) == doctest::Approx(1.0));
  CHECK(point_segment_distance({3.0, 0.0}, s) == doctest::Approx(1.0));
  CHECK(point_segment_distance({0.5, 0.0}, s) == 0.0);
}

TEST_CASE("blockage indicator against the blocker radius") {
  RoomLayout r = room_with({10.0, 0.0});
  const auto paths = build_paths(r, 0, 60.0, 15.0);
  const auto& los = paths[0];  // the segment x = 10
  r.blockerCells = {{10.2, 5.0}, {10.3, 5.0}, {10.0, 5.0}, {12.0, 5.0}};
  CHECK(blockage_indicator(r, 0, los, 0.3) == 0);
  CHECK(blockage_indicator(r, 1, los, 0.3) == 1);
  CHECK(blockage_indicator(r, 2, los, 0.3) == 0);
  CHECK(blockage_indicator(r, 3, los, 0.3) == 1);
}

TEST_CASE("ring cells are edge-adjacent in order") {
  const auto cells = ring_cells({10.0, 10.0}, 3, 1.0);
  REQUIRE(cells.size() == 24);
  for (std::size_t i = 0; i < cells.size(); ++i)
    CHECK(distance(cells[i], cells[(i + 1) % cells.size()]) == doctest::Approx(1.0));
}

TEST_CASE("perimeter sensors sit on the inset rectangle") {
  const auto pts = perimeter_sensor_positions(20.0, 20.0, 1.0, 8, 1);
  REQUIRE(pts.size() == 8);
  for (const Point& p : pts) {
    const double edge = std::min({p.x - 1.0, 19.0 - p.x, p.y - 1.0, 19.0 - p.y});
    CHECK(edge == doctest::Approx(0.0).epsilon(1e-9));
  }
  CHECK(perimeter_sensor_positions(20.0, 20.0, 1.0, 8, 1) == pts);
}

TEST_CASE("broadside angle") {
  CHECK(broadside_angle({0.0, 1.0}, 0.0) == doctest::Approx(0.0));
  CHECK(broadside_angle({1.0, 1.0}, 0.0) == doctest::Approx(std::asin(std::sqrt(0.5))));
}
