#include <cmath>

#include <filesystem>

#include <doctest.h>

#include "fpd/action_parser.hpp"
#include "fpd/error.hpp"
#include "fpd/experience.hpp"
#include "fpd/geodesy.hpp"
#include "support.hpp"

using namespace fpd;
using testing_support::fixture;
using testing_support::navdata;

namespace {

const ExperienceEntry& entry_named(const std::vector<ExperienceEntry>& memory, const std::string& name) {
  for (const auto& e : memory) {
    if (e.procedure == name) return e;
  }
  FAIL("no entry " << name);
  throw std::logic_error("unreachable");
}

// The recorded trace text printed after a given header inside the Plan reply.
std::string recorded_trace_after(const std::string& header) {
  const std::string text = fixture("round4_plan.txt");
  const auto at = text.find(header);
  REQUIRE(at != std::string::npos);
  const auto begin = at + header.size();
  return text.substr(begin, text.find('\n', begin) - begin);
}

ExperienceEntry entry(std::string runway, std::string dest, double heading, GeoPoint terminal) {
  ExperienceEntry e;
  e.procedure = dest + "-" + runway;
  e.runway = std::move(runway);
  e.destination = std::move(dest);
  e.runway_heading = heading;
  e.terminal_point = terminal;
  e.trace = {{1, 0.0, MetaAction::arrival()}};
  return e;
}

}  // namespace

TEST_CASE("bucketing of steps") {
  const auto a = MetaAction::containing({27.4, 25'700.7});
  CHECK(a.octant() == 0);
  CHECK(a.band() == DistanceBand::From20To30km);
  CHECK(a.to_string() == "(0-45°,20-30km)");

  const auto b = MetaAction::containing({359.9, 9'999.0});
  CHECK(b.to_string() == "(315-360°,0-10km)");

  CHECK(MetaAction::containing({45.0, 10'000.0}).to_string() == "(45-90°,10-20km)");
  CHECK(MetaAction::containing({44.999, 50'000.0}).to_string() == "(0-45°,50+km)");
  CHECK(MetaAction::containing({180.0, 30'000.0}).to_string() == "(180-225°,30-50km)");
  CHECK(MetaAction::arrival().to_string() == "arrival destination!");
}

TEST_CASE("bucket bounds and containment are half-open") {
  const auto m = MetaAction::step(2, DistanceBand::From10To20km);
  CHECK(m.azimuth_lower() == 90.0);
  CHECK(m.azimuth_upper() == 135.0);
  CHECK(m.distance_lower() == 10'000.0);
  CHECK(m.distance_upper() == 20'000.0);
  CHECK(m.contains({90.0, 10'000.0}));
  CHECK_FALSE(m.contains({135.0, 15'000.0}));
  CHECK_FALSE(m.contains({100.0, 20'000.0}));
  CHECK(std::isinf(MetaAction::step(0, DistanceBand::Over50km).distance_upper()));
  CHECK_THROWS_AS(MetaAction::step(8, DistanceBand::Under10km), Error);
  CHECK(octant_of(360.0) == 0);
  CHECK(octant_of(-0.1) == 7);
  CHECK(band_of(0.0) == DistanceBand::Under10km);
}

TEST_CASE("trace of a reference procedure has one item per waypoint plus arrival") {
  Airport a = lookup_airport(navdata(), "ZUUU");
  ReferenceProcedure p = a.procedures.front();
  p.waypoints.resize(2);
  p.waypoints.push_back(lookup_fix(navdata(), "ZUUU", p.destination).position);
  const ExperienceEntry e = encode_experience(a, p);
  REQUIRE(e.trace.size() == 4);
  CHECK(e.trace.back().action.is_arrival());
  CHECK(e.trace.back().waypoint_index == 4);
  // Distance is measured from each step's origin, the threshold first.
  const GeoPoint dest = lookup_fix(navdata(), "ZUUU", p.destination).position;
  CHECK(e.trace[0].dist_to_destination == doctest::Approx(geodesy::distance(a.runways[0].threshold, dest)));
  CHECK(e.trace[1].dist_to_destination == doctest::Approx(geodesy::distance(p.waypoints[0], dest)));
}

TEST_CASE("repeated waypoint is rejected") {
  Airport a = lookup_airport(navdata(), "ZUUU");
  ReferenceProcedure p = a.procedures.front();
  p.waypoints.insert(p.waypoints.begin() + 1, p.waypoints.front());
  CHECK_THROWS_AS(encode_experience(a, p), Error);
}

TEST_CASE("recorded same-runway trace is reproduced byte for byte") {
  const auto memory = build_memory(lookup_airport(navdata(), "ZUUU"));
  const ExperienceEntry& idbor = entry_named(memory, "IDBOR-9W");
  CHECK(format_trace_for_prompt(idbor) == recorded_trace_after("destination:IDDOR.procedure path:"));
  CHECK(format_similar_procedure(idbor).rfind("sid runway:02L,destination:IDBOR,procedure path:(1st waypoint.", 0) ==
        0);
}

TEST_CASE("recorded same-destination trace is reproduced byte for byte") {
  const auto memory = build_memory(lookup_airport(navdata(), "ZUUU"));
  const ExperienceEntry& guret = entry_named(memory, "GURET-8X");
  CHECK(guret.runway == "20L");
  CHECK(format_trace_for_prompt(guret) == recorded_trace_after("destination:GURET.procedure path:"));
}

TEST_CASE("trace items round-trip through the plan parser") {
  const auto memory = build_memory(lookup_airport(navdata(), "ZUUU"));
  for (const auto& e : memory) {
    for (const auto& item : e.trace) {
      const auto parsed = parse_meta_action("Meta Action:" + format_meta_line(item.waypoint_index, item.action));
      CHECK(parsed.action == item.action);
      if (!item.action.is_arrival()) CHECK(parsed.index == item.waypoint_index);
    }
  }
}

TEST_CASE("arrival-only trace") {
  ExperienceEntry e = entry("02L", "ABC", 21.8, {});
  CHECK(format_trace_for_prompt(e) == "(1st waypoint:arrival destination!)");
}

TEST_CASE("same-runway retrieval picks the nearest terminal") {
  const GeoPoint design{30.0, 104.0};
  const std::vector<ExperienceEntry> memory{
      entry("02L", "FAR", 21.8, geodesy::forward_point(design, {90.0, 20'000.0})),
      entry("02L", "NEAR", 21.8, geodesy::forward_point(design, {270.0, 10'000.0})),
      entry("20R", "OTHER", 201.8, design)};
  const auto r = similar_same_runway(memory, "02L", design);
  REQUIRE(r);
  CHECK(r->entry.destination == "NEAR");
  CHECK(r->score == doctest::Approx(1e-4).epsilon(1e-9));
  CHECK_FALSE(similar_same_runway(memory, "36", design));
}

TEST_CASE("coincident terminal is clamped and wins ties in load order") {
  const GeoPoint design{30.0, 104.0};
  const std::vector<ExperienceEntry> memory{entry("02L", "FIRST", 21.8, design),
                                            entry("02L", "SECOND", 21.8, design)};
  const auto r = similar_same_runway(memory, "02L", design);
  REQUIRE(r);
  CHECK(r->entry.destination == "FIRST");
  CHECK(r->score == 1.0);
}

TEST_CASE("same-destination retrieval by heading gap") {
  const std::vector<ExperienceEntry> memory{entry("20L", "GURET", 201.8, {}), entry("11", "GURET", 111.8, {}),
                                            entry("02L", "BOKIR", 21.8, {})};
  const auto r = similar_same_destination(memory, "GURET", 21.8);
  REQUIRE(r);
  CHECK(r->entry.runway == "11");
  CHECK(r->score == doctest::Approx(1.0 / 90.0).epsilon(1e-9));
  CHECK_FALSE(similar_same_destination(memory, "LUVEN", 21.8));

  const auto same = similar_same_destination(memory, "BOKIR", 21.8);
  REQUIRE(same);
  CHECK(same->score == doctest::Approx(10.0));
}

TEST_CASE("memory persists to JSON and back") {
  const auto memory = build_memory(lookup_airport(navdata(), "ZUCK"));
  const auto path = std::filesystem::temp_directory_path() / "fpd_memory_test.json";
  save_memory(path, memory);
  const auto loaded = load_memory(path);
  std::filesystem::remove(path);
  REQUIRE(loaded.size() == memory.size());
  for (std::size_t i = 0; i < memory.size(); ++i) {
    CHECK(loaded[i].procedure == memory[i].procedure);
    CHECK(format_trace_for_prompt(loaded[i]) == format_trace_for_prompt(memory[i]));
  }
}
