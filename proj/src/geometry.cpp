#include "aoisched/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "aoisched/random.hpp"

namespace aoisched {

double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
double norm(Point a) { return std::hypot(a.x, a.y); }
double distance(Point a, Point b) { return norm(a - b); }

namespace {

bool strictly_inside(Point p, double width, double height) {
  return p.x > 0.0 && p.x < width && p.y > 0.0 && p.y < height;
}

// Intersection of segments [p, p + r] and [q, q + s]; returns parameters on
// both when they meet.
bool segment_intersection(Point p, Point r, Point q, Point s, double& t, double& u) {
  const double denom = cross(r, s);
  if (std::abs(denom) < 1e-15) return false;
  const Point qp = q - p;
  t = cross(qp, s) / denom;
  u = cross(qp, r) / denom;
  constexpr double eps = 1e-12;
  return t >= -eps && t <= 1.0 + eps && u >= -eps && u <= 1.0 + eps;
}

}  // namespace

void RoomLayout::validate() const {
  if (!(width > 0.0) || !(height > 0.0)) throw std::invalid_argument("room dimensions must be positive");
  if (sensorPositions.empty()) throw std::invalid_argument("room needs at least one sensor");
  if (blockerCells.empty()) throw std::invalid_argument("room needs at least one blocker cell");
  if (!strictly_inside(bsPosition, width, height))
    throw std::invalid_argument("BS position lies outside the room");
  for (std::size_t k = 0; k < sensorPositions.size(); ++k) {
    if (!strictly_inside(sensorPositions[k], width, height))
      throw std::invalid_argument("sensor " + std::to_string(k) + " lies outside the room");
    if (sensorPositions[k] == bsPosition)
      throw std::invalid_argument("sensor " + std::to_string(k) + " coincides with the BS");
  }
  for (std::size_t i = 0; i < blockerCells.size(); ++i) {
    if (!strictly_inside(blockerCells[i], width, height))
      throw std::invalid_argument("blocker cell " + std::to_string(i) + " lies outside the room");
    for (std::size_t j = 0; j < i; ++j)
      if (blockerCells[i] == blockerCells[j])
        throw std::invalid_argument("blocker cells " + std::to_string(j) + " and " +
                                    std::to_string(i) + " coincide");
  }
  if (!sensorArrayAxes.empty() && sensorArrayAxes.size() != sensorPositions.size())
    throw std::invalid_argument("sensorArrayAxes must match the number of sensors");
}

double los_path_loss_db(double carrierGHz, double lengthMeters) {
  return 32.5 + 20.0 * std::log10(carrierGHz) + 20.0 * std::log10(lengthMeters);
}

double broadside_angle(Point direction, double arrayAxis) {
  const Point axis{std::cos(arrayAxis), std::sin(arrayAxis)};
  const double s = std::clamp(dot(direction, axis) / norm(direction), -1.0, 1.0);
  const double angle = std::asin(s);
  // Fold the closed endpoint so the range is (-pi/2, pi/2].
  return angle <= -std::numbers::pi / 2 ? std::numbers::pi / 2 : angle;
}

Point mirror_across(Point p, const Segment& wall) {
  const Point d = wall.b - wall.a;
  const double t = dot(p - wall.a, d) / dot(d, d);
  const Point foot = wall.a + t * d;
  return 2.0 * foot - p;
}

std::vector<PropagationPath> build_paths(const RoomLayout& room, std::size_t sensorIndex,
                                         double carrierGHz, double nlosExtraLossDb) {
  if (sensorIndex >= room.sensor_count())
    throw std::out_of_range("sensor index " + std::to_string(sensorIndex) + " out of range");
  const Point sensor = room.sensorPositions[sensorIndex];
  const Point bs = room.bsPosition;
  const double sensorAxis = room.sensorArrayAxes.empty() ? 0.0 : room.sensorArrayAxes[sensorIndex];

  auto finish = [&](PropagationPath path, double extraDb) {
    path.sensorIndex = sensorIndex;
    path.lengthR = 0.0;
    for (const auto& seg : path.segments) path.lengthR += seg.length();
    const Segment& first = path.segments.front();
    const Segment& last = path.segments.back();
    path.aodTheta = broadside_angle(first.b - first.a, sensorAxis);
    path.aoaPhi = broadside_angle(last.a - last.b, room.bsArrayAxis);
    path.pathLossDb = los_path_loss_db(carrierGHz, path.lengthR) + extraDb;
    path.pathLossLinear = std::pow(10.0, path.pathLossDb / 10.0);
    return path;
  };

  std::vector<PropagationPath> paths;
  PropagationPath los;
  los.pathIndex = 0;
  los.segments = {Segment{sensor, bs}};
  paths.push_back(finish(std::move(los), 0.0));

  for (std::size_t w = 0; w < room.walls.size(); ++w) {
    const Segment& wall = room.walls[w];
    const Point image = mirror_across(sensor, wall);
    double t = 0.0, u = 0.0;
    if (!segment_intersection(image, bs - image, wall.a, wall.b - wall.a, t, u)) continue;
    // Both endpoints must sit on the same side of the wall for a real bounce.
    const Point d = wall.b - wall.a;
    if (cross(d, sensor - wall.a) * cross(d, bs - wall.a) <= 0.0) continue;
    const Point hit = image + t * (bs - image);
    PropagationPath nlos;
    nlos.pathIndex = w + 1;
    nlos.segments = {Segment{sensor, hit}, Segment{hit, bs}};
    paths.push_back(finish(std::move(nlos), nlosExtraLossDb));
  }
  return paths;
}

double point_segment_distance(Point p, const Segment& s) {
  const Point d = s.b - s.a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return distance(p, s.a);
  const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  return distance(p, s.a + t * d);
}

double min_distance_to_path(Point cellCenter, const PropagationPath& path) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& seg : path.segments) best = std::min(best, point_segment_distance(cellCenter, seg));
  return best;
}

int blockage_indicator(const RoomLayout& room, std::size_t cellIndex, const PropagationPath& path,
                       double blockerRadius) {
  if (cellIndex >= room.cell_count())
    throw std::out_of_range("cell index " + std::to_string(cellIndex) + " out of range");
  return min_distance_to_path(room.blockerCells[cellIndex], path) >= blockerRadius ? 1 : 0;
}

std::vector<Segment> rectangle_walls(double width, double height) {
  return {
      Segment{{0.0, 0.0}, {width, 0.0}},
      Segment{{width, 0.0}, {width, height}},
      Segment{{width, height}, {0.0, height}},
      Segment{{0.0, height}, {0.0, 0.0}},
  };
}

std::vector<Point> perimeter_sensor_positions(double width, double height, double inset,
                                              std::size_t count, std::uint64_t seed) {
  const double w = width - 2.0 * inset;
  const double h = height - 2.0 * inset;
  if (!(w > 0.0) || !(h > 0.0)) throw std::invalid_argument("sensor inset leaves no room");
  const double perimeter = 2.0 * (w + h);
  RandomStream rng(seed, StreamPurpose::Layout);
  const double phase = rng.uniform() * perimeter / static_cast<double>(count);
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    double s = std::fmod(phase + perimeter * static_cast<double>(k) / static_cast<double>(count), perimeter);
    Point p;
    if (s < w) {
      p = {inset + s, inset};
    } else if ((s -= w) < h) {
      p = {inset + w, inset + s};
    } else if ((s -= h) < w) {
      p = {inset + w - s, inset + h};
    } else {
      s -= w;
      p = {inset, inset + h - s};
    }
    out.push_back(p);
  }
  return out;
}

std::vector<Point> ring_cells(Point center, int halfWidth, double spacing) {
  if (halfWidth < 1) throw std::invalid_argument("ring half width must be at least 1");
  std::vector<Point> cells;
  const int n = halfWidth;
  auto at = [&](int i, int j) { return Point{center.x + spacing * i, center.y + spacing * j}; };
  for (int i = -n; i < n; ++i) cells.push_back(at(i, -n));
  for (int j = -n; j < n; ++j) cells.push_back(at(n, j));
  for (int i = n; i > -n; --i) cells.push_back(at(i, n));
  for (int j = n; j > -n; --j) cells.push_back(at(-n, j));
  return cells;
}

double wall_parallel_axis(Point p, double width, double height) {
  const double toHorizontal = std::min(p.y, height - p.y);
  const double toVertical = std::min(p.x, width - p.x);
  return toHorizontal <= toVertical ? 0.0 : std::numbers::pi / 2;
}

}  // namespace aoisched
