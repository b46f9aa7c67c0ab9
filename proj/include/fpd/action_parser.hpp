#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "fpd/experience.hpp"
#include "fpd/geo.hpp"

namespace fpd {

struct ParsedMetaAction {
  std::optional<int> index;  // 1-based ordinal when the reply states one
  MetaAction action = MetaAction::arrival();
  bool operator==(const ParsedMetaAction&) const = default;
};

// Reads the last "Meta Action:" line of an agent reply (or the whole text when
// there is no label). Tolerates trailing noise after the closing parenthesis
// and a missing ordinal. Throws ParseError carrying the offending text.
ParsedMetaAction parse_meta_action(std::string_view text);

struct ParsedPosition {
  std::optional<int> index;
  PolarStep step;
  bool operator==(const ParsedPosition&) const = default;
};

// Reads the single "(bearing°,distancem)" pair after "Accurate waypoint
// position:". More than one pair is an error.
ParsedPosition parse_precise_position(std::string_view text);
PolarStep parse_precise_action(std::string_view text);

// "(27.4°,25700.7m)" and "4th waypoint:(0-45°,20-30km)" as agents write them.
std::string format_position(const PolarStep& step);
std::string format_meta_line(int index, const MetaAction& action);
std::string format_position_line(int index, const PolarStep& step);

}  // namespace fpd
