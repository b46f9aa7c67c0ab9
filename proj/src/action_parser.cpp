#include "fpd/action_parser.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

#include "fpd/error.hpp"
#include "fpd/text_format.hpp"

namespace fpd {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Position just past the last (or first) case-insensitive occurrence of label.
std::optional<std::size_t> after_label(std::string_view text, std::string_view label, bool last) {
  const std::string hay = lower(text);
  const std::string needle = lower(label);
  const auto at = last ? hay.rfind(needle) : hay.find(needle);
  if (at == std::string::npos) return std::nullopt;
  return at + needle.size();
}

std::string excerpt(std::string_view text) {
  constexpr std::size_t kMax = 160;
  std::string s(text.substr(0, kMax));
  if (text.size() > kMax) s += "...";
  return s;
}

const std::regex& ordinal_re() {
  static const std::regex re(R"((\d+)\s*(?:st|nd|rd|th)\s*waypoint)", std::regex::icase);
  return re;
}

const std::regex& bucket_re() {
  static const std::regex re(
      R"(\(\s*(\d+)\s*-\s*(\d+)\s*(?:°|º|deg)?\s*,\s*(\d+)\s*(?:-\s*(\d+)|\+)\s*km\s*\))",
      std::regex::icase);
  return re;
}

const std::regex& position_re() {
  static const std::regex re(
      R"(\(\s*(-?\d+(?:\.\d+)?)\s*(?:°|º|deg)?\s*,\s*(\d+(?:\.\d+)?)\s*m?\s*\))", std::regex::icase);
  return re;
}

std::optional<int> find_ordinal(const std::string& s) {
  std::smatch m;
  if (!std::regex_search(s, m, ordinal_re())) return std::nullopt;
  return std::stoi(m[1].str());
}

DistanceBand band_from_bounds(int lo_km, std::optional<int> hi_km, std::string_view text) {
  if (!hi_km) {
    if (lo_km == 50) return DistanceBand::Over50km;
  } else if (lo_km == 0 && *hi_km == 10) {
    return DistanceBand::Under10km;
  } else if (lo_km == 10 && *hi_km == 20) {
    return DistanceBand::From10To20km;
  } else if (lo_km == 20 && *hi_km == 30) {
    return DistanceBand::From20To30km;
  } else if (lo_km == 30 && *hi_km == 50) {
    return DistanceBand::From30To50km;
  }
  throw ParseError("unknown distance band in: " + excerpt(text));
}

}  // namespace

ParsedMetaAction parse_meta_action(std::string_view text) {
  std::string_view section = text;
  if (const auto at = after_label(text, "Meta Action", true)) {
    section = text.substr(*at);
    const auto eol = section.find('\n');
    if (eol != std::string_view::npos) section = section.substr(0, eol);
  }
  const std::string s(section);
  ParsedMetaAction out;
  out.index = find_ordinal(s);

  if (lower(s).find("arrival") != std::string::npos) {
    out.action = MetaAction::arrival();
    return out;
  }

  std::smatch m;
  if (!std::regex_search(s, m, bucket_re())) throw ParseError("no meta action in: " + excerpt(text));
  const int az_lo = std::stoi(m[1].str());
  const int az_hi = std::stoi(m[2].str());
  if (az_lo % 45 != 0 || az_hi != az_lo + 45 || az_hi > 360) {
    throw ParseError("unknown azimuth octant in: " + excerpt(text));
  }
  const int d_lo = std::stoi(m[3].str());
  const std::optional<int> d_hi = m[4].matched ? std::optional<int>(std::stoi(m[4].str())) : std::nullopt;
  out.action = MetaAction::step(az_lo / 45, band_from_bounds(d_lo, d_hi, text));

  const std::string rest = m.suffix().str();
  if (std::regex_search(rest, bucket_re())) throw ParseError("more than one meta action in: " + excerpt(text));
  return out;
}

ParsedPosition parse_precise_position(std::string_view text) {
  std::string_view section = text;
  if (const auto at = after_label(text, "Accurate waypoint position", false)) section = text.substr(*at);
  const std::string s(section);

  std::smatch m;
  if (!std::regex_search(s, m, position_re())) throw ParseError("no waypoint position in: " + excerpt(text));
  const std::string head = m.prefix().str();
  const std::string rest = m.suffix().str();
  if (std::regex_search(rest, position_re())) {
    throw ParseError("more than one waypoint position in: " + excerpt(text));
  }
  ParsedPosition out;
  out.index = find_ordinal(head);
  try {
    out.step = make_step(std::stod(m[1].str()), std::stod(m[2].str()));
  } catch (const Error&) {
    throw ParseError("invalid waypoint position in: " + excerpt(text));
  }
  return out;
}

PolarStep parse_precise_action(std::string_view text) { return parse_precise_position(text).step; }

std::string format_position(const PolarStep& step) {
  return "(" + fixed(step.bearing, 1) + "°," + fixed(step.distance, 1) + "m)";
}

std::string format_meta_line(int index, const MetaAction& action) {
  return ordinal(index) + " waypoint:" + action.to_string();
}

std::string format_position_line(int index, const PolarStep& step) {
  return ordinal(index) + " waypoint accurate position:" + format_position(step);
}

}  // namespace fpd
