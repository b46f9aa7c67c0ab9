#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fpd/geo.hpp"

namespace fpd {

struct Runway {
  std::string name;      // uppercase, e.g. "02L"
  GeoPoint threshold;    // departure origin; elevation = der_elevation
  double heading = 0.0;  // [0, 360)
  double der_elevation = 0.0;

  bool operator==(const Runway&) const = default;
};

struct Fix {
  std::string name;
  GeoPoint position;

  bool operator==(const Fix&) const = default;
};

struct Obstacle {
  std::string name;
  GeoPoint position;
  double elevation = 0.0;  // meters MSL

  bool operator==(const Obstacle&) const = default;
};

struct ReferenceProcedure {
  std::string name;
  std::string runway;
  std::string destination;
  std::vector<GeoPoint> waypoints;

  bool operator==(const ReferenceProcedure&) const = default;
};

struct Airport {
  std::string icao;
  std::vector<Runway> runways;
  std::vector<Fix> fixes;
  std::vector<Obstacle> obstacles;
  std::vector<ReferenceProcedure> procedures;

  bool operator==(const Airport&) const = default;
};

// Immutable after load; share freely across sessions.
struct NavDatabase {
  std::vector<Airport> airports;

  bool operator==(const NavDatabase&) const = default;
};

// Maximum gap between a procedure's last waypoint and its destination fix.
inline constexpr double kTerminalToleranceMeters = 100.0;

// Throws ParseError, SchemaError (with a JSON path) or ReferenceError.
NavDatabase load_database(const std::filesystem::path& path);
NavDatabase parse_database(std::string_view json_text);

// Trimmed, uppercased identifier as stored in the database.
std::string normalize_identifier(std::string_view raw);

// Lookups are case-insensitive and whitespace tolerant; they throw NotFound.
const Airport& lookup_airport(const NavDatabase& db, std::string_view icao);
const Runway& lookup_runway(const NavDatabase& db, std::string_view icao, std::string_view runway);
const Fix& lookup_fix(const NavDatabase& db, std::string_view icao, std::string_view name);

const Runway* find_runway(const Airport& airport, std::string_view runway) noexcept;
const Fix* find_fix(const Airport& airport, std::string_view name) noexcept;
const ReferenceProcedure* find_procedure(const Airport& airport, std::string_view runway,
                                         std::string_view destination) noexcept;

}  // namespace fpd
