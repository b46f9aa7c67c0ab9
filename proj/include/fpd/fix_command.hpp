#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

namespace fpd {

// Supervisor correction: replace waypoint `fix_waypoint` by the point reached
// from an anchor along (bearing, distance). The anchor defaults to the stored
// predecessor of that waypoint.
struct FixCommand {
  enum class Action { Fix, NoFix };
  Action action = Action::NoFix;
  int fix_waypoint = 0;  // 1-based
  double bearing = 0.0;
  double distance = 0.0;
  std::optional<double> last_waypoint_lat;
  std::optional<double> last_waypoint_lon;

  bool operator==(const FixCommand&) const = default;

  static FixCommand no_fix() { return {}; }
  static FixCommand fix(int index, double bearing, double distance) {
    return {Action::Fix, index, bearing, distance, std::nullopt, std::nullopt};
  }
};

// Accepts "no fix", "1st waypoint fix, fix_bearing:21.9, fix_distance:3551.4"
// (with optional last_waypoint_lat/lon fields) and the list form
// "fix: [1, 21.9, 3551.4, 30.59, 103.95]". Throws ParseError.
FixCommand parse_fix_command(std::string_view text);

std::string format_fix_command(const FixCommand& cmd);

// Field-level JSON form used by the service. from_json throws InvalidArgument
// for missing or mistyped fields.
nlohmann::json fix_command_to_json(const FixCommand& cmd);
FixCommand fix_command_from_json(const nlohmann::json& j);

}  // namespace fpd
