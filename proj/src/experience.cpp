#include "fpd/experience.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fpd/action_parser.hpp"
#include "fpd/error.hpp"
#include "fpd/geodesy.hpp"
#include "fpd/text_format.hpp"

namespace fpd {

namespace {

constexpr double kBandEdges[] = {0.0, 10'000.0, 20'000.0, 30'000.0, 50'000.0};

const char* band_label(DistanceBand band) {
  switch (band) {
    case DistanceBand::Under10km: return "0-10km";
    case DistanceBand::From10To20km: return "10-20km";
    case DistanceBand::From20To30km: return "20-30km";
    case DistanceBand::From30To50km: return "30-50km";
    case DistanceBand::Over50km: return "50+km";
  }
  return "";
}

}  // namespace

MetaAction MetaAction::step(int octant, DistanceBand band) {
  if (octant < 0 || octant > 7) throw Error(ErrorKind::InvalidArgument, "octant out of range");
  return MetaAction(octant, band);
}

MetaAction MetaAction::containing(const PolarStep& s) {
  return MetaAction(octant_of(s.bearing), band_of(s.distance));
}

double MetaAction::distance_lower() const noexcept {
  return kBandEdges[static_cast<int>(band_)];
}

double MetaAction::distance_upper() const noexcept {
  const int i = static_cast<int>(band_);
  return i + 1 < 5 ? kBandEdges[i + 1] : std::numeric_limits<double>::infinity();
}

bool MetaAction::contains(const PolarStep& s) const noexcept {
  if (arrival_) return false;
  return octant_of(s.bearing) == octant_ && s.distance >= distance_lower() &&
         s.distance < distance_upper();
}

std::string MetaAction::to_string() const {
  if (arrival_) return "arrival destination!";
  return "(" + std::to_string(45 * octant_) + "-" + std::to_string(45 * (octant_ + 1)) + "°," +
         band_label(band_) + ")";
}

int octant_of(double bearing) noexcept {
  const int k = static_cast<int>(std::floor(geodesy::normalize_bearing(bearing) / 45.0));
  return std::clamp(k, 0, 7);
}

DistanceBand band_of(double meters) noexcept {
  if (meters < 10'000.0) return DistanceBand::Under10km;
  if (meters < 20'000.0) return DistanceBand::From10To20km;
  if (meters < 30'000.0) return DistanceBand::From20To30km;
  if (meters < 50'000.0) return DistanceBand::From30To50km;
  return DistanceBand::Over50km;
}

ExperienceEntry encode_experience(const Airport& airport, const ReferenceProcedure& proc) {
  const Runway* runway = find_runway(airport, proc.runway);
  const Fix* dest = find_fix(airport, proc.destination);
  if (runway == nullptr) throw ReferenceError(proc.runway, "unknown runway " + proc.runway);
  if (dest == nullptr) throw ReferenceError(proc.destination, "unknown fix " + proc.destination);

  ExperienceEntry entry;
  entry.procedure = proc.name;
  entry.destination = proc.destination;
  entry.runway = proc.runway;
  entry.runway_heading = runway->heading;
  entry.terminal_point = proc.waypoints.empty() ? dest->position : proc.waypoints.back();

  GeoPoint origin = runway->threshold;
  int index = 1;
  for (const auto& wp : proc.waypoints) {
    if (geodesy::distance(origin, wp) < geodesy::kCoincidentMeters) {
      throw Error(ErrorKind::DegenerateLeg,
                  proc.name + ": waypoint " + std::to_string(index) + " repeats its predecessor");
    }
    const PolarStep s = geodesy::inverse(origin, wp);
    entry.trace.push_back({index, geodesy::distance(origin, dest->position), MetaAction::containing(s)});
    origin = wp;
    ++index;
  }
  entry.trace.push_back({index, 0.0, MetaAction::arrival()});
  return entry;
}

std::vector<ExperienceEntry> build_memory(const Airport& airport) {
  std::vector<ExperienceEntry> memory;
  memory.reserve(airport.procedures.size());
  for (const auto& proc : airport.procedures) memory.push_back(encode_experience(airport, proc));
  return memory;
}

std::optional<Retrieval> similar_same_runway(std::span<const ExperienceEntry> memory,
                                             std::string_view design_runway,
                                             const GeoPoint& design_terminal) {
  const std::string key = normalize_identifier(design_runway);
  std::optional<Retrieval> best;
  for (const auto& e : memory) {
    if (e.runway != key) continue;
    const double gap = std::max(geodesy::distance(e.terminal_point, design_terminal), kMinTerminalGapMeters);
    const double score = 1.0 / gap;
    if (!best || score > best->score) best = Retrieval{e, score};
  }
  return best;
}

std::optional<Retrieval> similar_same_destination(std::span<const ExperienceEntry> memory,
                                                  std::string_view design_destination,
                                                  double design_heading) {
  const std::string key = normalize_identifier(design_destination);
  std::optional<Retrieval> best;
  for (const auto& e : memory) {
    if (e.destination != key) continue;
    const double gap =
        std::max(geodesy::angular_difference(e.runway_heading, design_heading), kMinHeadingGapDeg);
    const double score = 1.0 / gap;
    if (!best || score > best->score) best = Retrieval{e, score};
  }
  return best;
}

std::string format_trace_item(const TraceItem& item) {
  if (item.action.is_arrival()) {
    return "(" + ordinal(item.waypoint_index) + " waypoint:arrival destination!)";
  }
  return "(" + ordinal(item.waypoint_index) + " waypoint.dis to destination:" +
         fixed(item.dist_to_destination, 1) + ",meta action:" + item.action.to_string() + ")";
}

std::string format_trace_for_prompt(const ExperienceEntry& entry) {
  std::string out;
  for (std::size_t i = 0; i < entry.trace.size(); ++i) {
    if (i) out += ',';
    out += format_trace_item(entry.trace[i]);
  }
  return out;
}

std::string format_similar_procedure(const ExperienceEntry& entry) {
  return "sid runway:" + entry.runway + ",destination:" + entry.destination +
         ",procedure path:" + format_trace_for_prompt(entry);
}

nlohmann::json memory_to_json(std::span<const ExperienceEntry> memory) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : memory) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& t : e.trace) {
      trace.push_back({{"index", t.waypoint_index},
                       {"dist_m", t.dist_to_destination},
                       {"action", t.action.to_string()}});
    }
    entries.push_back({{"procedure", e.procedure},
                       {"destination", e.destination},
                       {"runway", e.runway},
                       {"runway_heading_deg", e.runway_heading},
                       {"terminal", {e.terminal_point.lat, e.terminal_point.lon}},
                       {"trace", std::move(trace)}});
  }
  return {{"entries", std::move(entries)}};
}

std::vector<ExperienceEntry> memory_from_json(const nlohmann::json& doc) {
  std::vector<ExperienceEntry> memory;
  try {
    for (const auto& j : doc.at("entries")) {
      ExperienceEntry e;
      e.procedure = j.at("procedure").get<std::string>();
      e.destination = normalize_identifier(j.at("destination").get<std::string>());
      e.runway = normalize_identifier(j.at("runway").get<std::string>());
      e.runway_heading = j.at("runway_heading_deg").get<double>();
      e.terminal_point = {j.at("terminal").at(0).get<double>(), j.at("terminal").at(1).get<double>()};
      for (const auto& t : j.at("trace")) {
        const auto parsed = parse_meta_action(t.at("action").get<std::string>());
        e.trace.push_back({t.at("index").get<int>(), t.at("dist_m").get<double>(), parsed.action});
      }
      if (e.trace.empty() || !e.trace.back().action.is_arrival()) {
        throw SchemaError("entries", e.procedure + ": trace must end with arrival");
      }
      memory.push_back(std::move(e));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw SchemaError("entries", ex.what());
  }
  return memory;
}

void save_memory(const std::filesystem::path& path, std::span<const ExperienceEntry> memory) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << memory_to_json(memory).dump(1) << '\n';
}

std::vector<ExperienceEntry> load_memory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed memory JSON: ") + e.what());
  }
  return memory_from_json(doc);
}

}  // namespace fpd
