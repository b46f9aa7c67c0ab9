#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fpd/geo.hpp"
#include "fpd/navdata.hpp"

namespace fpd {

enum class DistanceBand { Under10km, From10To20km, From20To30km, From30To50km, Over50km };

// A Plan-level decision: one 45-degree azimuth octant and one distance band,
// or the terminal Arrival marker. All intervals are half-open [lower, upper).
class MetaAction {
 public:
  static MetaAction arrival() { return MetaAction(); }
  static MetaAction step(int octant, DistanceBand band);
  // The unique bucket containing the step.
  static MetaAction containing(const PolarStep& step);

  bool is_arrival() const noexcept { return arrival_; }
  int octant() const noexcept { return octant_; }  // 0..7
  DistanceBand band() const noexcept { return band_; }

  double azimuth_lower() const noexcept { return 45.0 * octant_; }
  double azimuth_upper() const noexcept { return 45.0 * (octant_ + 1); }
  double distance_lower() const noexcept;  // meters
  double distance_upper() const noexcept;  // meters, infinity for the open band

  bool contains(const PolarStep& step) const noexcept;

  // "(0-45°,0-10km)", "(135-180°,50+km)" or "arrival destination!"
  std::string to_string() const;

  bool operator==(const MetaAction&) const = default;

 private:
  MetaAction() = default;
  MetaAction(int octant, DistanceBand band) : arrival_(false), octant_(octant), band_(band) {}

  bool arrival_ = true;
  int octant_ = 0;
  DistanceBand band_ = DistanceBand::Under10km;
};

int octant_of(double bearing) noexcept;
DistanceBand band_of(double meters) noexcept;

struct TraceItem {
  int waypoint_index = 0;           // 1-based
  double dist_to_destination = 0;   // from the step's origin, meters
  MetaAction action = MetaAction::arrival();

  bool operator==(const TraceItem&) const = default;
};

// One remembered procedure: [destination, runway, path] plus what retrieval needs.
struct ExperienceEntry {
  std::string procedure;
  std::string destination;
  std::string runway;
  double runway_heading = 0.0;
  GeoPoint terminal_point;
  std::vector<TraceItem> trace;

  bool operator==(const ExperienceEntry&) const = default;
};

struct Retrieval {
  ExperienceEntry entry;
  double score = 0.0;
};

// Retrieval reciprocals are floored so a perfect match scores finitely.
inline constexpr double kMinTerminalGapMeters = 1.0;
inline constexpr double kMinHeadingGapDeg = 0.1;

// Step k originates at the previous waypoint (the runway threshold for k = 1).
// Item k records the distance from that origin to the destination and the
// bucket of the step; an Arrival item at distance 0 closes the trace.
// Throws DegenerateLeg on coincident consecutive points.
ExperienceEntry encode_experience(const Airport& airport, const ReferenceProcedure& proc);

std::vector<ExperienceEntry> build_memory(const Airport& airport);

// Highest 1/gap score among entries from the same runway; first loaded wins ties.
std::optional<Retrieval> similar_same_runway(std::span<const ExperienceEntry> memory,
                                             std::string_view design_runway,
                                             const GeoPoint& design_terminal);

// Highest 1/heading-gap score among entries ending at the same fix.
std::optional<Retrieval> similar_same_destination(std::span<const ExperienceEntry> memory,
                                                  std::string_view design_destination,
                                                  double design_heading);

// "(1st waypoint.dis to destination:162529.8,meta action:(0-45°,0-10km)),...,(7th waypoint:arrival destination!)"
std::string format_trace_for_prompt(const ExperienceEntry& entry);
std::string format_trace_item(const TraceItem& item);

// "sid runway:02L,destination:IDBOR,procedure path:" followed by the trace.
std::string format_similar_procedure(const ExperienceEntry& entry);

nlohmann::json memory_to_json(std::span<const ExperienceEntry> memory);
std::vector<ExperienceEntry> memory_from_json(const nlohmann::json& doc);
void save_memory(const std::filesystem::path& path, std::span<const ExperienceEntry> memory);
std::vector<ExperienceEntry> load_memory(const std::filesystem::path& path);

}  // namespace fpd
