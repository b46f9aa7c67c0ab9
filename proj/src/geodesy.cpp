#include "fpd/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fpd/error.hpp"

namespace fpd {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

bool is_valid(const GeoPoint& p) noexcept {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && std::isfinite(p.elevation) &&
         p.lat >= -90.0 && p.lat <= 90.0 && p.lon > -180.0 && p.lon <= 180.0;
}

PolarStep make_step(double bearing, double distance) {
  if (!std::isfinite(bearing) || !std::isfinite(distance) || distance <= 0.0) {
    throw Error(ErrorKind::InvalidStep, "invalid step: bearing and distance must be finite, distance > 0");
  }
  return {geodesy::normalize_bearing(bearing), distance};
}

namespace geodesy {

double normalize_bearing(double deg) noexcept {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;
  return r;
}

double normalize_lon(double deg) noexcept {
  double r = std::fmod(deg + 180.0, 360.0);
  if (r < 0.0) r += 360.0;
  r -= 180.0;
  return r == -180.0 ? 180.0 : r;
}

double signed_difference(double from, double to) noexcept {
  double d = normalize_bearing(to - from);
  return d > 180.0 ? d - 360.0 : d;
}

double angular_difference(double a, double b) noexcept {
  return std::abs(signed_difference(a, b));
}

GeoPoint forward_point(const GeoPoint& origin, const PolarStep& step, const EarthModel& model) {
  if (std::abs(origin.lat) >= kPolarLimitDeg) {
    throw Error(ErrorKind::PolarRegion, "origin latitude within 1 degree of a pole");
  }
  if (step.distance == 0.0) return origin;

  const double phi1 = origin.lat * kDeg;
  const double lambda1 = origin.lon * kDeg;
  const double theta = normalize_bearing(step.bearing) * kDeg;
  const double delta = step.distance / model.radius;

  const double sin_phi2 = std::sin(phi1) * std::cos(delta) +
                          std::cos(phi1) * std::sin(delta) * std::cos(theta);
  const double phi2 = std::asin(std::clamp(sin_phi2, -1.0, 1.0));
  const double lambda2 =
      lambda1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(phi1),
                           std::cos(delta) - std::sin(phi1) * sin_phi2);

  return {phi2 / kDeg, normalize_lon(lambda2 / kDeg), origin.elevation};
}

double distance(const GeoPoint& a, const GeoPoint& b, const EarthModel& model) noexcept {
  // atan2 of |a x b| and a . b stays well conditioned at both small and large separations.
  const double phi1 = a.lat * kDeg, phi2 = b.lat * kDeg;
  const double dl = (b.lon - a.lon) * kDeg;
  const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dl);
  const double y = std::cos(phi2) * std::sin(dl);
  const double cross = std::hypot(x, y);
  const double dot = std::sin(phi1) * std::sin(phi2) + std::cos(phi1) * std::cos(phi2) * std::cos(dl);
  return std::atan2(cross, dot) * model.radius;
}

double initial_bearing(const GeoPoint& a, const GeoPoint& b) noexcept {
  const double phi1 = a.lat * kDeg, phi2 = b.lat * kDeg;
  const double dl = (b.lon - a.lon) * kDeg;
  const double y = std::sin(dl) * std::cos(phi2);
  const double x = std::cos(phi1) * std::sin(phi2) - std::sin(phi1) * std::cos(phi2) * std::cos(dl);
  if (x == 0.0 && y == 0.0) return 0.0;
  return normalize_bearing(std::atan2(y, x) / kDeg);
}

PolarStep inverse(const GeoPoint& origin, const GeoPoint& target, const EarthModel& model) {
  const double d = distance(origin, target, model);
  if (d < kCoincidentMeters) {
    throw Error(ErrorKind::CoincidentPoints, "inverse of coincident points");
  }
  return {initial_bearing(origin, target), d};
}

}  // namespace geodesy
}  // namespace fpd
