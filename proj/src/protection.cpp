#include "fpd/protection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "fpd/error.hpp"
#include "fpd/geodesy.hpp"
#include "fpd/text_format.hpp"

namespace fpd::protection {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

using Vec3 = std::array<double, 3>;

Vec3 unit(const GeoPoint& p) {
  const double phi = p.lat * kDeg, lambda = p.lon * kDeg;
  return {std::cos(phi) * std::cos(lambda), std::cos(phi) * std::sin(lambda), std::sin(phi)};
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

}  // namespace

const char* to_string(Band band) {
  switch (band) {
    case Band::Primary: return "primary";
    case Band::Secondary: return "secondary";
    case Band::Outside: return "outside";
  }
  return "outside";
}

void validate(const ZoneConfig& cfg) {
  if (!(cfg.half_width > 0.0) || !(cfg.primary_fraction > 0.0) || cfg.primary_fraction > 1.0 ||
      !(cfg.moc_gradient > 0.0) || !(cfg.moc_min >= 0.0) || !(cfg.climb_gradient > 0.0) ||
      !(cfg.notable_radius > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "invalid protection zone configuration");
  }
}

double leg_length(const Leg& leg, const EarthModel& model) {
  return geodesy::distance(leg.start, leg.end, model);
}

std::vector<Leg> build_legs(const GeoPoint& threshold, std::span<const GeoPoint> waypoints,
                            const EarthModel& model) {
  std::vector<Leg> legs;
  legs.reserve(waypoints.size());
  GeoPoint from = threshold;
  double along = 0.0;
  for (const auto& to : waypoints) {
    legs.push_back({from, to, along});
    along += geodesy::distance(from, to, model);
    from = to;
  }
  return legs;
}

ZonePointClass classify_point(const Leg& leg, const GeoPoint& p, const ZoneConfig& cfg,
                              const EarthModel& model) {
  const Vec3 a = unit(leg.start), b = unit(leg.end), q = unit(p);
  Vec3 n = cross(a, b);
  const double n_len = norm(n);
  if (n_len < 1e-15) throw Error(ErrorKind::DegenerateLeg, "leg start and end coincide");
  for (auto& c : n) c /= n_len;

  const double leg_angle = std::atan2(n_len, dot(a, b));
  const double off = std::clamp(dot(q, n), -1.0, 1.0);

  ZonePointClass cls;
  cls.cross_track = -std::asin(off) * model.radius;  // n points left of travel

  Vec3 foot{q[0] - off * n[0], q[1] - off * n[1], q[2] - off * n[2]};
  const double foot_len = norm(foot);
  if (foot_len < 1e-15) {
    cls.band = Band::Outside;
    return cls;
  }
  const double along_angle = std::atan2(dot(cross(a, foot), n), dot(a, foot));
  const double along = along_angle * model.radius;
  const double length = leg_angle * model.radius;
  cls.along_track = std::clamp(along, 0.0, length);

  const double lateral = std::abs(cls.cross_track);
  if (along < 0.0 || along > length || lateral > cfg.half_width) {
    cls.band = Band::Outside;
  } else if (lateral <= cfg.primary_half_width()) {
    cls.band = Band::Primary;
  } else {
    cls.band = Band::Secondary;
  }
  return cls;
}

double minimum_obstacle_clearance(double along_track_total, const ZoneConfig& cfg) {
  return std::max(cfg.moc_min, cfg.moc_gradient * along_track_total);
}

double required_clearance(double along_track_total, const ZonePointClass& cls, const ZoneConfig& cfg) {
  const double moc = minimum_obstacle_clearance(along_track_total, cfg);
  switch (cls.band) {
    case Band::Primary:
      return moc;
    case Band::Secondary: {
      const double taper_width = cfg.half_width * (1.0 - cfg.primary_fraction);
      const double remaining = cfg.half_width - std::abs(cls.cross_track);
      return moc * std::clamp(remaining / taper_width, 0.0, 1.0);
    }
    case Band::Outside:
      return 0.0;
  }
  return 0.0;
}

double evaluation_altitude(double along_track_total, double der_elevation, const ZoneConfig& cfg) {
  return der_elevation + cfg.climb_gradient * along_track_total;
}

std::vector<Violation> leg_violations(const Leg& leg, double der_elevation,
                                      std::span<const Obstacle> obstacles, const ZoneConfig& cfg,
                                      int leg_index, const EarthModel& model) {
  std::vector<Violation> out;
  for (const auto& obstacle : obstacles) {
    const ZonePointClass cls = classify_point(leg, obstacle.position, cfg, model);
    if (cls.band == Band::Outside) continue;
    const double s = leg.start_along_track + cls.along_track;
    const double clearance = evaluation_altitude(s, der_elevation, cfg) - obstacle.elevation;
    const double required = required_clearance(s, cls, cfg);
    if (clearance < required) {
      out.push_back({obstacle.name, leg_index, required - clearance});
    }
  }
  return out;
}

std::vector<NotableObstacle> notable_obstacles(const GeoPoint& reference, double der_elevation,
                                               std::span<const Obstacle> obstacles,
                                               const ZoneConfig& cfg, double along_track_offset,
                                               const EarthModel& model) {
  std::vector<NotableObstacle> out;
  for (const auto& obstacle : obstacles) {
    const double d = geodesy::distance(reference, obstacle.position, model);
    if (d > cfg.notable_radius) continue;
    const double s = along_track_offset + d;
    const double surface = evaluation_altitude(s, der_elevation, cfg) - minimum_obstacle_clearance(s, cfg);
    if (obstacle.elevation > surface) {
      out.push_back({obstacle, {geodesy::initial_bearing(reference, obstacle.position), d}});
    }
  }
  return out;
}

std::string format_notable(const NotableObstacle& n) {
  return "(name:" + n.obstacle.name + ",relative position:" + fixed(n.relative.bearing, 2) +
         "°,distance:" + fixed(n.relative.distance, 1) + "m)";
}

std::string format_notable_list(std::span<const NotableObstacle> list) {
  if (list.empty()) return "No notable obstacles";
  std::string out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i) out += ',';
    out += format_notable(list[i]);
  }
  return out;
}

}  // namespace fpd::protection
