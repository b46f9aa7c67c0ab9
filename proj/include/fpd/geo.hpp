#pragma once

namespace fpd {

// Geographic position in decimal degrees; elevation in meters above MSL.
struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;
  double elevation = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

bool is_valid(const GeoPoint& p) noexcept;

// True bearing (degrees clockwise from north) and arc distance in meters.
// This is the [azimuth, distance] unit every planning agent emits.
struct PolarStep {
  double bearing = 0.0;
  double distance = 0.0;

  bool operator==(const PolarStep&) const = default;
};

// Throws InvalidStep unless bearing is finite and distance finite and > 0.
// Returns the step with its bearing normalized to [0, 360).
PolarStep make_step(double bearing, double distance);

struct EarthModel {
  double radius = 6'371'000.0;

  bool operator==(const EarthModel&) const = default;
};

}  // namespace fpd
