#pragma once

#include <span>
#include <string>
#include <vector>

#include "fpd/geo.hpp"
#include "fpd/navdata.hpp"

namespace fpd::protection {

// Lateral and vertical protection parameters. Distances in meters.
struct ZoneConfig {
  double half_width = 4360.0;     // centerline to outer edge, each side
  double primary_fraction = 0.5;  // inner share of half_width with full clearance
  double moc_gradient = 0.008;    // MOC per meter of track from DER
  double moc_min = 0.0;
  double climb_gradient = 0.033;  // procedure climb from DER elevation
  double notable_radius = 50'000.0;

  bool operator==(const ZoneConfig&) const = default;
  double primary_half_width() const noexcept { return half_width * primary_fraction; }
};

// Throws InvalidArgument on non-positive widths or a fraction outside (0, 1].
void validate(const ZoneConfig& cfg);

struct Leg {
  GeoPoint start;
  GeoPoint end;
  double start_along_track = 0.0;  // cumulative track distance from DER at start

  bool operator==(const Leg&) const = default;
};

enum class Band { Primary, Secondary, Outside };
const char* to_string(Band band);

struct ZonePointClass {
  Band band = Band::Outside;
  double cross_track = 0.0;  // signed, positive right of track
  double along_track = 0.0;  // from leg start, clamped to [0, leg length]
};

struct Violation {
  std::string obstacle;
  int leg_index = 0;
  double deficit = 0.0;  // required minus actual clearance, > 0

  bool operator==(const Violation&) const = default;
};

struct NotableObstacle {
  Obstacle obstacle;
  PolarStep relative;  // from the search reference point
};

// Legs threshold -> w1 -> ... -> wn with cumulative along-track offsets.
std::vector<Leg> build_legs(const GeoPoint& threshold, std::span<const GeoPoint> waypoints,
                            const EarthModel& model = {});

double leg_length(const Leg& leg, const EarthModel& model = {});

// Zone membership is the rectangle [0, L] x [-half_width, +half_width] in
// (along, cross) coordinates projected on the leg's great circle. Boundaries
// belong to the inner band.
ZonePointClass classify_point(const Leg& leg, const GeoPoint& p, const ZoneConfig& cfg,
                              const EarthModel& model = {});

double minimum_obstacle_clearance(double along_track_total, const ZoneConfig& cfg);

// Full MOC in the primary band, linear taper to zero across the secondary band.
double required_clearance(double along_track_total, const ZonePointClass& cls, const ZoneConfig& cfg);

double evaluation_altitude(double along_track_total, double der_elevation, const ZoneConfig& cfg);

// An obstacle is unsafe when altitude minus elevation is below the required
// clearance; exact equality is safe.
std::vector<Violation> leg_violations(const Leg& leg, double der_elevation,
                                      std::span<const Obstacle> obstacles, const ZoneConfig& cfg,
                                      int leg_index = 0, const EarthModel& model = {});

// Obstacles within notable_radius of reference that would violate if
// overflown directly. along_track_offset is the track distance already flown
// from DER to the reference point.
std::vector<NotableObstacle> notable_obstacles(const GeoPoint& reference, double der_elevation,
                                               std::span<const Obstacle> obstacles,
                                               const ZoneConfig& cfg, double along_track_offset = 0.0,
                                               const EarthModel& model = {});

// "(name:UJ,relative position:270.71°,distance:48965.5m)"
std::string format_notable(const NotableObstacle& n);
// Comma-joined list, or "No notable obstacles".
std::string format_notable_list(std::span<const NotableObstacle> list);

}  // namespace fpd::protection
