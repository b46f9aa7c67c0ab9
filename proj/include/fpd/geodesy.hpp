#pragma once

#include "fpd/geo.hpp"

// Spherical great-circle navigation. All angles are degrees, distances meters.
namespace fpd::geodesy {

// Latitude beyond which forward_point refuses to run (longitude is ill-conditioned).
inline constexpr double kPolarLimitDeg = 89.0;
// Points closer than this are treated as the same point by inverse().
inline constexpr double kCoincidentMeters = 0.1;

double normalize_bearing(double deg) noexcept;   // [0, 360)
double normalize_lon(double deg) noexcept;       // (-180, 180]
double signed_difference(double from, double to) noexcept;  // to - from in (-180, 180]
double angular_difference(double a, double b) noexcept;     // [0, 180]

// Destination reached from origin along the great circle with the step's
// initial bearing. Throws PolarRegion when |origin.lat| >= 89.
GeoPoint forward_point(const GeoPoint& origin, const PolarStep& step, const EarthModel& model = {});

// Initial bearing and arc distance from origin to target.
// Throws CoincidentPoints when they are closer than 0.1 m.
PolarStep inverse(const GeoPoint& origin, const GeoPoint& target, const EarthModel& model = {});

// Arc distance without the coincidence check.
double distance(const GeoPoint& a, const GeoPoint& b, const EarthModel& model = {}) noexcept;

// Initial bearing, 0 for coincident points.
double initial_bearing(const GeoPoint& a, const GeoPoint& b) noexcept;

}  // namespace fpd::geodesy
