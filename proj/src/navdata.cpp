#include "fpd/navdata.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <regex>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fpd/error.hpp"
#include "fpd/geodesy.hpp"

namespace fpd {

using nlohmann::json;

std::string normalize_identifier(std::string_view raw) {
  auto begin = raw.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = raw.find_last_not_of(" \t\r\n");
  std::string out(raw.substr(begin, end - begin + 1));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

namespace {

const json& field(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw SchemaError(path, "expected object");
  auto it = obj.find(key);
  if (it == obj.end()) throw SchemaError(path + "." + key, "missing field");
  return *it;
}

const json& array_field(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_array()) throw SchemaError(path + "." + key, "expected array");
  return v;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw SchemaError(path, "expected number");
  double d = v.get<double>();
  if (!std::isfinite(d)) throw SchemaError(path, "expected finite number");
  return d;
}

double number_field(const json& obj, const char* key, const std::string& path) {
  return number(field(obj, key, path), path + "." + key);
}

std::string name_field(const json& obj, const char* key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_string()) throw SchemaError(path + "." + key, "expected string");
  std::string name = normalize_identifier(v.get<std::string>());
  if (name.empty()) throw SchemaError(path + "." + key, "empty identifier");
  return name;
}

GeoPoint position(double lat, double lon, double elevation, const std::string& path) {
  if (lat < -90.0 || lat > 90.0) throw SchemaError(path + ".lat", "latitude out of range");
  if (lon <= -180.0 || lon > 180.0) throw SchemaError(path + ".lon", "longitude out of range");
  return {lat, lon, elevation};
}

std::string indexed(const std::string& path, const char* key, std::size_t i) {
  return path + "." + key + "[" + std::to_string(i) + "]";
}

const std::regex& runway_pattern() {
  static const std::regex re("^[0-9]{1,2}[LCR]?$");
  return re;
}

template <typename T>
void require_unique(const std::vector<T>& items, const std::string& path, const char* key) {
  std::set<std::string> seen;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (!seen.insert(items[i].name).second) {
      throw SchemaError(indexed(path, key, i) + ".name", "duplicate name " + items[i].name);
    }
  }
}

Airport parse_airport(const json& a, const std::string& path) {
  Airport airport;
  airport.icao = name_field(a, "icao", path);

  const json& runways = array_field(a, "runways", path);
  for (std::size_t i = 0; i < runways.size(); ++i) {
    const auto p = indexed(path, "runways", i);
    Runway r;
    r.name = name_field(runways[i], "name", p);
    if (!std::regex_match(r.name, runway_pattern())) {
      throw SchemaError(p + ".name", "runway name must be digits plus optional L/C/R: " + r.name);
    }
    r.der_elevation = number_field(runways[i], "der_elev_m", p);
    r.threshold = position(number_field(runways[i], "lat", p), number_field(runways[i], "lon", p),
                           r.der_elevation, p);
    r.heading = geodesy::normalize_bearing(number_field(runways[i], "heading_deg", p));
    airport.runways.push_back(std::move(r));
  }

  const json& fixes = array_field(a, "fixes", path);
  for (std::size_t i = 0; i < fixes.size(); ++i) {
    const auto p = indexed(path, "fixes", i);
    Fix f;
    f.name = name_field(fixes[i], "name", p);
    f.position = position(number_field(fixes[i], "lat", p), number_field(fixes[i], "lon", p), 0.0, p);
    airport.fixes.push_back(std::move(f));
  }

  const json& obstacles = array_field(a, "obstacles", path);
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    const auto p = indexed(path, "obstacles", i);
    Obstacle o;
    o.name = name_field(obstacles[i], "name", p);
    o.elevation = number_field(obstacles[i], "elev_m", p);
    if (o.elevation <= 0.0) throw SchemaError(p + ".elev_m", "obstacle elevation must be > 0");
    o.position = position(number_field(obstacles[i], "lat", p), number_field(obstacles[i], "lon", p),
                          o.elevation, p);
    airport.obstacles.push_back(std::move(o));
  }

  const json& procedures = array_field(a, "procedures", path);
  for (std::size_t i = 0; i < procedures.size(); ++i) {
    const auto p = indexed(path, "procedures", i);
    ReferenceProcedure proc;
    proc.name = name_field(procedures[i], "name", p);
    proc.runway = name_field(procedures[i], "runway", p);
    proc.destination = name_field(procedures[i], "destination", p);
    const json& wpts = array_field(procedures[i], "waypoints", p);
    if (wpts.empty()) throw SchemaError(p + ".waypoints", "procedure needs at least one waypoint");
    for (std::size_t k = 0; k < wpts.size(); ++k) {
      const auto wp = indexed(p, "waypoints", k);
      if (!wpts[k].is_array() || wpts[k].size() != 2) throw SchemaError(wp, "expected [lat, lon]");
      proc.waypoints.push_back(position(number(wpts[k][0], wp + "[0]"), number(wpts[k][1], wp + "[1]"), 0.0, wp));
    }
    airport.procedures.push_back(std::move(proc));
  }

  require_unique(airport.runways, path, "runways");
  require_unique(airport.fixes, path, "fixes");
  require_unique(airport.obstacles, path, "obstacles");
  require_unique(airport.procedures, path, "procedures");

  for (std::size_t i = 0; i < airport.procedures.size(); ++i) {
    const auto& proc = airport.procedures[i];
    if (find_runway(airport, proc.runway) == nullptr) {
      throw ReferenceError(proc.runway, indexed(path, "procedures", i) + ": procedure " + proc.name +
                                            " names unknown runway " + proc.runway);
    }
    const Fix* dest = find_fix(airport, proc.destination);
    if (dest == nullptr) {
      throw ReferenceError(proc.destination, indexed(path, "procedures", i) + ": procedure " +
                                                 proc.name + " names unknown fix " + proc.destination);
    }
    const double gap = geodesy::distance(proc.waypoints.back(), dest->position);
    if (gap > kTerminalToleranceMeters) {
      throw SchemaError(indexed(path, "procedures", i) + ".waypoints",
                        "last waypoint is " + std::to_string(gap) + " m from " + proc.destination);
    }
  }
  return airport;
}

}  // namespace

NavDatabase parse_database(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  NavDatabase db;
  const json& airports = array_field(doc, "airports", "$");
  std::set<std::string> seen;
  for (std::size_t i = 0; i < airports.size(); ++i) {
    Airport a = parse_airport(airports[i], indexed("$", "airports", i));
    if (!seen.insert(a.icao).second) {
      throw SchemaError(indexed("$", "airports", i) + ".icao", "duplicate airport " + a.icao);
    }
    db.airports.push_back(std::move(a));
  }
  return db;
}

NavDatabase load_database(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_database(buf.str());
}

const Runway* find_runway(const Airport& airport, std::string_view runway) noexcept {
  std::string key = normalize_identifier(runway);
  if (key.size() > 3 && key.starts_with("RWY")) key.erase(0, 3);
  for (const auto& r : airport.runways) {
    if (r.name == key) return &r;
  }
  return nullptr;
}

const Fix* find_fix(const Airport& airport, std::string_view name) noexcept {
  const std::string key = normalize_identifier(name);
  for (const auto& f : airport.fixes) {
    if (f.name == key) return &f;
  }
  return nullptr;
}

const ReferenceProcedure* find_procedure(const Airport& airport, std::string_view runway,
                                         std::string_view destination) noexcept {
  std::string rwy = normalize_identifier(runway);
  if (rwy.size() > 3 && rwy.starts_with("RWY")) rwy.erase(0, 3);
  const std::string dest = normalize_identifier(destination);
  for (const auto& p : airport.procedures) {
    if (p.runway == rwy && p.destination == dest) return &p;
  }
  return nullptr;
}

const Airport& lookup_airport(const NavDatabase& db, std::string_view icao) {
  const std::string key = normalize_identifier(icao);
  for (const auto& a : db.airports) {
    if (a.icao == key) return a;
  }
  throw NotFound(key);
}

const Runway& lookup_runway(const NavDatabase& db, std::string_view icao, std::string_view runway) {
  const Runway* r = find_runway(lookup_airport(db, icao), runway);
  if (r == nullptr) throw NotFound(normalize_identifier(runway));
  return *r;
}

const Fix& lookup_fix(const NavDatabase& db, std::string_view icao, std::string_view name) {
  const Fix* f = find_fix(lookup_airport(db, icao), name);
  if (f == nullptr) throw NotFound(normalize_identifier(name));
  return *f;
}

}  // namespace fpd
