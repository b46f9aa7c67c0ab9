#include "fpd/export_render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fpd/error.hpp"
#include "fpd/geodesy.hpp"
#include "fpd/session.hpp"
#include "fpd/text_format.hpp"

namespace fpd {

using nlohmann::json;

namespace {

constexpr double kInset = 1e-3;          // meters
constexpr double kDensifyStep = 5000.0;  // meters between edge vertices

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto at = line.find(sep, start);
    out.emplace_back(line.substr(start, at == std::string_view::npos ? std::string_view::npos : at - start));
    if (at == std::string_view::npos) break;
    start = at + 1;
  }
  return out;
}

double parse_number(const std::string& s, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line) + ": not a number: " + s, line);
  }
  if (used != s.size() || !std::isfinite(v)) {
    throw ParseError("line " + std::to_string(line) + ": not a number: " + s, line);
  }
  return v;
}

struct TrackFrame {
  GeoPoint start;
  GeoPoint end;
  double bearing0;
  double length;
};

// Point at along-track a, pushed cross-track c (positive right).
GeoPoint offset_point(const TrackFrame& f, double a, double c) {
  const GeoPoint t = geodesy::forward_point(f.start, {f.bearing0, a});
  const double local = a < f.length / 2 ? geodesy::initial_bearing(t, f.end)
                                        : geodesy::normalize_bearing(geodesy::initial_bearing(t, f.start) + 180.0);
  if (c == 0.0) return t;
  const double side = c > 0 ? 90.0 : -90.0;
  return geodesy::forward_point(t, {geodesy::normalize_bearing(local + side), std::abs(c)});
}

std::vector<double> stations(double length) {
  const double span = std::max(length - 2 * kInset, 0.0);
  const int n = std::max(1, static_cast<int>(std::ceil(span / kDensifyStep)));
  std::vector<double> a;
  for (int k = 0; k <= n; ++k) a.push_back(kInset + span * k / n);
  return a;
}

double signed_area(const std::vector<GeoPoint>& ring) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
    s += ring[i].lon * ring[i + 1].lat - ring[i + 1].lon * ring[i].lat;
  }
  return s / 2;
}

std::vector<GeoPoint> band_ring(const protection::Leg& leg, double inner, double outer) {
  TrackFrame f{leg.start, leg.end, geodesy::initial_bearing(leg.start, leg.end), geodesy::distance(leg.start, leg.end)};
  if (f.length < geodesy::kCoincidentMeters) throw Error(ErrorKind::DegenerateLeg, "zero-length leg");
  const auto a = stations(f.length);
  std::vector<GeoPoint> ring;
  for (double x : a) ring.push_back(offset_point(f, x, outer));
  for (auto it = a.rbegin(); it != a.rend(); ++it) ring.push_back(offset_point(f, *it, inner));
  ring.push_back(ring.front());
  if (signed_area(ring) < 0) std::reverse(ring.begin(), ring.end());
  return ring;
}

json ring_json(const std::vector<GeoPoint>& ring) {
  json r = json::array();
  for (const auto& p : ring) r.push_back({p.lon, p.lat});
  return r;
}

json feature(json geometry, json properties) {
  return {{"type", "Feature"}, {"geometry", std::move(geometry)}, {"properties", std::move(properties)}};
}

json point_geometry(const GeoPoint& p) { return {{"type", "Point"}, {"coordinates", {p.lon, p.lat}}}; }

RenderInput input_of(const DesignSession& s) {
  return {s.task.procedure,        s.runway(), s.destination(), s.context->airport.obstacles, s.waypoints, s.round,
          to_string(s.status)};
}

}  // namespace

std::string export_txt(const ProcedureDesign& d) {
  if (d.waypoints.empty()) throw Error(ErrorKind::EmptyProcedure, "procedure has no waypoints");
  std::string out = d.procedure + "," + d.runway + "," + d.destination + "\n";
  for (std::size_t i = 0; i < d.waypoints.size(); ++i) {
    out += std::to_string(i + 1) + "," + fixed(d.waypoints[i].lat, 6) + "," + fixed(d.waypoints[i].lon, 6) + "\n";
  }
  out += d.completed ? "status,Completed\n" : "status,Exhausted\n";
  return out;
}

std::string export_txt(const DesignSession& session) { return export_txt(design_of(session)); }

ProcedureDesign import_txt(std::string_view text, const NavDatabase& db, std::optional<std::string_view> icao) {
  std::vector<std::string> lines;
  for (auto& l : split(text, '\n')) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    lines.push_back(std::move(l));
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ParseError("line 1: missing header", 1);

  const auto header = split(lines[0], ',');
  if (header.size() != 3 || header[1].empty() || header[2].empty()) {
    throw ParseError("line 1: expected procedure,runway,destination", 1);
  }
  ProcedureDesign d;
  d.procedure = header[0];
  d.runway = normalize_identifier(header[1]);
  d.destination = normalize_identifier(header[2]);

  bool have_status = false;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const int line = static_cast<int>(i) + 1;
    const auto f = split(lines[i], ',');
    if (have_status) throw ParseError("line " + std::to_string(line) + ": content after status", line);
    if (f.size() == 2 && f[0] == "status") {
      if (f[1] == "Completed") {
        d.completed = true;
      } else if (f[1] != "Exhausted") {
        throw ParseError("line " + std::to_string(line) + ": unknown status " + f[1], line);
      }
      have_status = true;
      continue;
    }
    if (f.size() != 3) throw ParseError("line " + std::to_string(line) + ": expected index,lat,lon", line);
    const double index = parse_number(f[0], line);
    if (index != static_cast<double>(d.waypoints.size() + 1)) {
      throw ParseError("line " + std::to_string(line) + ": waypoint index out of sequence", line);
    }
    GeoPoint p{parse_number(f[1], line), parse_number(f[2], line)};
    if (!is_valid(p)) throw ParseError("line " + std::to_string(line) + ": coordinates out of range", line);
    d.waypoints.push_back(p);
  }
  if (!have_status) {
    const int line = static_cast<int>(lines.size()) + 1;
    throw ParseError("line " + std::to_string(line) + ": missing status line", line);
  }
  if (d.waypoints.empty()) throw Error(ErrorKind::EmptyProcedure, "procedure has no waypoints");

  const Airport* airport = nullptr;
  if (icao) {
    const std::string key = normalize_identifier(*icao);
    for (const auto& a : db.airports) {
      if (a.icao == key) airport = &a;
    }
    if (airport == nullptr) throw ReferenceError(key, "unknown airport " + key);
    if (find_runway(*airport, d.runway) == nullptr) throw ReferenceError(d.runway, "unknown runway " + d.runway);
    if (find_fix(*airport, d.destination) == nullptr) {
      throw ReferenceError(d.destination, "unknown fix " + d.destination);
    }
  } else {
    bool runway_seen = false;
    for (const auto& a : db.airports) {
      const bool rw = find_runway(a, d.runway) != nullptr;
      runway_seen = runway_seen || rw;
      if (rw && find_fix(a, d.destination) != nullptr) {
        airport = &a;
        break;
      }
    }
    if (airport == nullptr) {
      if (!runway_seen) throw ReferenceError(d.runway, "unknown runway " + d.runway);
      throw ReferenceError(d.destination, "unknown fix " + d.destination);
    }
  }
  d.icao = airport->icao;
  d.runway = find_runway(*airport, d.runway)->name;
  return d;
}

std::vector<GeoPoint> primary_ring(const protection::Leg& leg, const protection::ZoneConfig& cfg) {
  const double w = cfg.primary_half_width() - kInset;
  return band_ring(leg, -w, w);
}

std::vector<GeoPoint> secondary_ring(const protection::Leg& leg, const protection::ZoneConfig& cfg, int side) {
  const double s = side >= 0 ? 1.0 : -1.0;
  return band_ring(leg, s * (cfg.primary_half_width() + kInset), s * (cfg.half_width - kInset));
}

json render_snapshot(const RenderInput& in, const protection::ZoneConfig& cfg) {
  json features = json::array();
  const auto legs = protection::build_legs(in.runway.threshold, in.waypoints);

  if (!in.waypoints.empty()) {
    json line = json::array();
    line.push_back({in.runway.threshold.lon, in.runway.threshold.lat});
    for (const auto& w : in.waypoints) line.push_back({w.lon, w.lat});
    features.push_back(feature({{"type", "LineString"}, {"coordinates", std::move(line)}},
                               {{"kind", "route"}, {"waypoints", in.waypoints.size()}}));
  }

  for (std::size_t i = 0; i < legs.size(); ++i) {
    const int leg = static_cast<int>(i) + 1;
    features.push_back(feature({{"type", "Polygon"}, {"coordinates", json::array({ring_json(primary_ring(legs[i], cfg))})}},
                               {{"kind", "zone"}, {"band", "primary"}, {"leg", leg}}));
    json strips = json::array({json::array({ring_json(secondary_ring(legs[i], cfg, +1))}),
                               json::array({ring_json(secondary_ring(legs[i], cfg, -1))})});
    features.push_back(feature({{"type", "MultiPolygon"}, {"coordinates", std::move(strips)}},
                               {{"kind", "zone"}, {"band", "secondary"}, {"leg", leg}}));
  }

  double flown = 0.0;
  for (const auto& l : legs) flown += protection::leg_length(l);
  const GeoPoint here = in.waypoints.empty() ? in.runway.threshold : in.waypoints.back();
  const auto notable = protection::notable_obstacles(here, in.runway.der_elevation, in.obstacles, cfg, flown);
  for (const auto& o : in.obstacles) {
    const bool is_notable = std::any_of(notable.begin(), notable.end(),
                                        [&](const auto& n) { return n.obstacle.name == o.name; });
    features.push_back(feature(point_geometry(o.position),
                               {{"kind", "obstacle"}, {"name", o.name}, {"elev_m", o.elevation}, {"notable", is_notable}}));
  }
  features.push_back(feature(point_geometry(in.destination.position),
                             {{"kind", "destination"}, {"name", in.destination.name}}));

  return {{"type", "FeatureCollection"},
          {"features", std::move(features)},
          {"metadata",
           {{"procedure", in.procedure},
            {"runway", in.runway.name},
            {"destination", in.destination.name},
            {"round", in.round},
            {"status", in.status}}}};
}

json render_snapshot(const DesignSession& session) { return render_snapshot(input_of(session), session.config().zone); }

std::string render_geojson(const DesignSession& session) { return render_snapshot(session).dump(); }

}  // namespace fpd
