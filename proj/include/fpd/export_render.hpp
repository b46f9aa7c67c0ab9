#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fpd/metrics.hpp"
#include "fpd/navdata.hpp"
#include "fpd/protection.hpp"

namespace fpd {

struct DesignSession;

// Line 1 "<procedure>,<runway>,<destination>", then "<index>,<lat>,<lon>" per
// waypoint at 6 decimals, then "status,Completed" or "status,Exhausted".
// LF endings. Throws EmptyProcedure without waypoints.
std::string export_txt(const ProcedureDesign& design);
std::string export_txt(const DesignSession& session);

// Inverse of export_txt. Without icao the airport is the first one where both
// runway and destination resolve. Throws ParseError (with 1-based line),
// ReferenceError or EmptyProcedure.
ProcedureDesign import_txt(std::string_view text, const NavDatabase& db,
                           std::optional<std::string_view> icao = std::nullopt);

// Ring of a leg's zone band in [lon, lat] order, closed and counter-clockwise.
// Vertices are inset 1 mm from the band edges so they classify inside.
std::vector<GeoPoint> primary_ring(const protection::Leg& leg, const protection::ZoneConfig& cfg);
// side = +1 right of track, -1 left.
std::vector<GeoPoint> secondary_ring(const protection::Leg& leg, const protection::ZoneConfig& cfg, int side);

struct RenderInput {
  std::string procedure;
  Runway runway;
  Fix destination;
  std::vector<Obstacle> obstacles;
  std::vector<GeoPoint> waypoints;
  int round = 0;
  std::string status;
};

// FeatureCollection: route LineString (threshold onward, omitted without
// waypoints), one primary Polygon and one secondary MultiPolygon per leg,
// obstacle Points (elev_m, notable) and the destination Point.
nlohmann::json render_snapshot(const RenderInput& input, const protection::ZoneConfig& cfg = {});
nlohmann::json render_snapshot(const DesignSession& session);
std::string render_geojson(const DesignSession& session);

}  // namespace fpd
