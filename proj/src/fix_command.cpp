#include "fpd/fix_command.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include <nlohmann/json.hpp>

#include "fpd/error.hpp"
#include "fpd/text_format.hpp"

namespace fpd {

namespace {

constexpr const char* kNumber = R"((-?\d+(?:\.\d+)?))";

std::optional<double> keyed_number(const std::string& s, const std::string& key) {
  const std::regex re(key + R"(\s*[:=]\s*)" + kNumber, std::regex::icase);
  std::smatch m;
  if (!std::regex_search(s, m, re)) return std::nullopt;
  return std::stod(m[1].str());
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

FixCommand parse_fix_command(std::string_view text) {
  const std::string s(text);

  static const std::regex list_re(
      R"(fix\s*:?\s*\[\s*(\d+)\s*,\s*(-?\d+(?:\.\d+)?)\s*,\s*(\d+(?:\.\d+)?)\s*(?:,\s*(-?\d+(?:\.\d+)?)\s*,\s*(-?\d+(?:\.\d+)?)\s*)?\])",
      std::regex::icase);
  std::smatch m;
  if (std::regex_search(s, m, list_re)) {
    FixCommand cmd = FixCommand::fix(std::stoi(m[1].str()), std::stod(m[2].str()), std::stod(m[3].str()));
    if (m[4].matched) {
      cmd.last_waypoint_lat = std::stod(m[4].str());
      cmd.last_waypoint_lon = std::stod(m[5].str());
    }
    return cmd;
  }

  const auto bearing = keyed_number(s, "fix_bearing");
  const auto distance = keyed_number(s, "fix_distance");
  if (!bearing && !distance) {
    static const std::regex no_fix_re(R"(\bno[\s_]*fix\b)", std::regex::icase);
    if (std::regex_search(s, no_fix_re)) return FixCommand::no_fix();
    throw ParseError("unrecognized feedback: " + s);
  }
  if (!bearing || !distance) throw ParseError("fix needs both fix_bearing and fix_distance: " + s);

  static const std::regex index_re(R"((\d+)\s*(?:st|nd|rd|th)\s*waypoint)", std::regex::icase);
  std::optional<int> index;
  if (std::regex_search(s, m, index_re)) {
    index = std::stoi(m[1].str());
  } else if (const auto k = keyed_number(s, "fix_waypoint")) {
    index = static_cast<int>(*k);
  }
  if (!index) throw ParseError("fix does not name a waypoint: " + s);

  FixCommand cmd = FixCommand::fix(*index, *bearing, *distance);
  cmd.last_waypoint_lat = keyed_number(s, "last_waypoint_lat");
  cmd.last_waypoint_lon = keyed_number(s, "last_waypoint_lon");
  if (cmd.last_waypoint_lat.has_value() != cmd.last_waypoint_lon.has_value()) {
    throw ParseError("last_waypoint_lat and last_waypoint_lon go together: " + s);
  }
  return cmd;
}

std::string format_fix_command(const FixCommand& cmd) {
  if (cmd.action == FixCommand::Action::NoFix) return "no fix";
  std::string out = ordinal(cmd.fix_waypoint) + " waypoint fix, fix_bearing:" + compact(cmd.bearing, 6) +
                    ", fix_distance:" + compact(cmd.distance, 6);
  if (cmd.last_waypoint_lat && cmd.last_waypoint_lon) {
    out += ", last_waypoint_lat:" + compact(*cmd.last_waypoint_lat, 9) +
           ", last_waypoint_lon:" + compact(*cmd.last_waypoint_lon, 9);
  }
  return out;
}

nlohmann::json fix_command_to_json(const FixCommand& cmd) {
  nlohmann::json j;
  if (cmd.action == FixCommand::Action::NoFix) {
    j["action"] = "no_fix";
    return j;
  }
  j["action"] = "fix";
  j["fix_waypoint"] = cmd.fix_waypoint;
  j["bearing"] = cmd.bearing;
  j["distance"] = cmd.distance;
  if (cmd.last_waypoint_lat) j["last_waypoint_lat"] = *cmd.last_waypoint_lat;
  if (cmd.last_waypoint_lon) j["last_waypoint_lon"] = *cmd.last_waypoint_lon;
  return j;
}

FixCommand fix_command_from_json(const nlohmann::json& j) {
  auto bad = [](const std::string& what) { return Error(ErrorKind::InvalidArgument, what); };
  if (!j.is_object()) throw bad("feedback must be a JSON object");
  if (!j.contains("action") || !j["action"].is_string()) throw bad("feedback needs a string 'action'");
  const std::string action = lower(j["action"].get<std::string>());
  if (action == "no_fix" || action == "no fix" || action == "nofix") return FixCommand::no_fix();
  if (action != "fix") throw bad("action must be 'fix' or 'no_fix'");

  auto number = [&](const char* key) -> double {
    if (!j.contains(key) || !j[key].is_number()) throw bad(std::string("fix needs numeric '") + key + "'");
    return j[key].get<double>();
  };
  if (!j.contains("fix_waypoint") || !j["fix_waypoint"].is_number_integer()) {
    throw bad("fix needs integer 'fix_waypoint'");
  }
  FixCommand cmd = FixCommand::fix(j["fix_waypoint"].get<int>(), number("bearing"), number("distance"));
  const bool has_lat = j.contains("last_waypoint_lat") && !j["last_waypoint_lat"].is_null();
  const bool has_lon = j.contains("last_waypoint_lon") && !j["last_waypoint_lon"].is_null();
  if (has_lat != has_lon) throw bad("last_waypoint_lat and last_waypoint_lon go together");
  if (has_lat) {
    cmd.last_waypoint_lat = number("last_waypoint_lat");
    cmd.last_waypoint_lon = number("last_waypoint_lon");
  }
  return cmd;
}

}  // namespace fpd
