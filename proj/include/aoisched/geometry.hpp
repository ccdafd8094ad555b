#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace aoisched {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) = default;
};

double dot(Point a, Point b);
double cross(Point a, Point b);
double norm(Point a);
double distance(Point a, Point b);

struct Segment {
  Point a;
  Point b;

  double length() const { return distance(a, b); }
};

/// Indoor scene: rectangular room, reflecting walls, BS, sensors and the
/// quantized blocker cells. Array axes are the orientation (radians from +x)
/// of each ULA's element line; angles of arrival/departure are measured from
/// the array broadside, i.e. sin(angle) is the projection onto the axis.
struct RoomLayout {
  double width = 20.0;
  double height = 20.0;
  std::vector<Segment> walls;
  Point bsPosition{10.0, 10.0};
  std::vector<Point> sensorPositions;
  std::vector<Point> blockerCells;
  double bsArrayAxis = 0.0;
  std::vector<double> sensorArrayAxes;

  std::size_t sensor_count() const { return sensorPositions.size(); }
  std::size_t cell_count() const { return blockerCells.size(); }

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

struct PropagationPath {
  std::size_t sensorIndex = 0;
  std::size_t pathIndex = 0;  // 0 is the LoS path
  std::vector<Segment> segments;
  double lengthR = 0.0;
  double aoaPhi = 0.0;    // at the BS, from the final segment
  double aodTheta = 0.0;  // at the sensor, from the first segment
  double pathLossDb = 0.0;
  double pathLossLinear = 1.0;

  bool is_los() const { return pathIndex == 0; }
};

/// Free-space style loss 32.5 + 20 log10(f_GHz) + 20 log10(R_m) in dB.
double los_path_loss_db(double carrierGHz, double lengthMeters);

/// Angle in (-pi/2, pi/2] between a direction and the broadside of a ULA
/// whose element line points along `arrayAxis`.
double broadside_angle(Point direction, double arrayAxis);

/// Mirror image of `p` across the infinite line through `wall`.
Point mirror_across(Point p, const Segment& wall);

/// LoS path at index 0 followed by one first-order wall reflection per wall
/// (image method). Walls without a valid reflection point are skipped, so
/// the result can be shorter than walls.size() + 1; path indices keep the
/// wall numbering (wall w gives pathIndex w + 1).
std::vector<PropagationPath> build_paths(const RoomLayout& room, std::size_t sensorIndex,
                                         double carrierGHz, double nlosExtraLossDb);

double point_segment_distance(Point p, const Segment& s);
double min_distance_to_path(Point cellCenter, const PropagationPath& path);

/// 1 when the blocker disk centred on the cell clears every segment of the
/// path by at least `blockerRadius`, 0 otherwise.
int blockage_indicator(const RoomLayout& room, std::size_t cellIndex,
                       const PropagationPath& path, double blockerRadius);

// Default scene construction.
std::vector<Segment> rectangle_walls(double width, double height);

/// K sensors spread evenly along the rectangle inset by `inset` metres from
/// the walls, starting at a seeded random phase.
std::vector<Point> perimeter_sensor_positions(double width, double height, double inset,
                                              std::size_t count, std::uint64_t seed);

/// Square ring of cells at Chebyshev distance `halfWidth` cells around
/// `center`, ordered so consecutive cells are edge-adjacent (8*halfWidth cells).
std::vector<Point> ring_cells(Point center, int halfWidth, double spacing);

/// Axis parallel to the wall closest to the point.
double wall_parallel_axis(Point p, double width, double height);

}  // namespace aoisched
