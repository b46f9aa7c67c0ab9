#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "fpd/error.hpp"
#include "fpd/export_render.hpp"
#include "fpd/geodesy.hpp"
#include "fpd/metrics.hpp"
#include "fpd/scripted_backend.hpp"
#include "support.hpp"

using namespace fpd;
using namespace testing_support;

namespace {

ProcedureDesign recorded_design() {
  return {"ZUUU", "GURET-9W", "02L", "GURET", recorded_finished_waypoints(), false};
}

std::vector<nlohmann::json> features_of_kind(const nlohmann::json& fc, const std::string& kind) {
  std::vector<nlohmann::json> out;
  for (const auto& f : fc["features"]) {
    if (f["properties"]["kind"] == kind) out.push_back(f);
  }
  return out;
}

}  // namespace

TEST_CASE("export lists the finished waypoints") {
  const std::string txt = export_txt(recorded_design());
  CHECK(txt ==
        "GURET-9W,02L,GURET\n"
        "1,30.672785,103.991117\n"
        "2,30.709621,104.008689\n"
        "3,30.820674,104.138080\n"
        "status,Exhausted\n");
}

TEST_CASE("export of an empty design") {
  ProcedureDesign d = recorded_design();
  d.waypoints.clear();
  try {
    export_txt(d);
    FAIL("expected EmptyProcedure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyProcedure);
  }
  CHECK_THROWS_AS(export_txt(create_session(navdata(), "ZUUU", "02L", "GURET")), Error);
}

TEST_CASE("import is the inverse of export") {
  DesignSession s = create_session(navdata(), "ZUUU", "02L", "GURET");
  ScriptedBackend backend;
  run_to_end(s, backend);
  const std::string txt = export_txt(s);
  const ProcedureDesign back = import_txt(txt, navdata());
  REQUIRE(back.waypoints.size() == s.waypoints.size());
  for (std::size_t i = 0; i < s.waypoints.size(); ++i) {
    CHECK(std::fabs(back.waypoints[i].lat - s.waypoints[i].lat) <= 5e-7);
    CHECK(std::fabs(back.waypoints[i].lon - s.waypoints[i].lon) <= 5e-7);
  }
  CHECK(back.completed == (s.status == SessionStatus::Completed));
  CHECK(back.icao == "ZUUU");
  CHECK(export_txt(back) == txt);
  CHECK(import_txt(txt, navdata(), "ZUUU") == back);
}

TEST_CASE("import errors") {
  try {
    import_txt("GURET-9W,02L,GURET\n1,30.672785,103.991117\n2,abc,104.0\nstatus,Completed\n", navdata());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  try {
    import_txt("X,02L,GURET\n1,30.6,104.0\n3,30.7,104.0\nstatus,Completed\n", navdata());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(import_txt("X,02L,GURET\n1,30.6,104.0\n", navdata()), ParseError);
  try {
    import_txt("X,36R,GURET\n1,30.6,104.0\nstatus,Completed\n", navdata());
    FAIL("expected ReferenceError");
  } catch (const ReferenceError& e) {
    CHECK(e.key() == "36R");
  }
  CHECK_THROWS_AS(import_txt("X,02L,NOPE\n1,30.6,104.0\nstatus,Completed\n", navdata()), ReferenceError);
  CHECK_THROWS_AS(import_txt("X,02L,GURET\n1,30.6,104.0\nstatus,Completed\n", navdata(), "ZUCK"), ReferenceError);
  CHECK_THROWS_AS(import_txt("X,02L,GURET\nstatus,Completed\n", navdata()), Error);
}

TEST_CASE("snapshot without waypoints holds only the destination and obstacles") {
  const DesignSession s = create_session(navdata(), "ZUUU", "02L", "GURET");
  const auto fc = render_snapshot(s);
  CHECK(fc["type"] == "FeatureCollection");
  CHECK(features_of_kind(fc, "route").empty());
  CHECK(features_of_kind(fc, "zone").empty());
  CHECK(features_of_kind(fc, "destination").size() == 1);
  CHECK(features_of_kind(fc, "obstacle").size() == s.context->airport.obstacles.size());
  CHECK(fc["features"].size() == 1 + s.context->airport.obstacles.size());
}

TEST_CASE("one leg renders one primary polygon and one pair of secondary strips") {
  RenderInput in;
  in.procedure = "TEST";
  in.runway = lookup_runway(navdata(), "ZUUU", "02L");
  in.destination = lookup_fix(navdata(), "ZUUU", "GURET");
  in.waypoints = {geodesy::forward_point(in.runway.threshold, {21.8, 12'000.0})};
  const auto fc = render_snapshot(in);
  const auto zones = features_of_kind(fc, "zone");
  REQUIRE(zones.size() == 2);
  CHECK(zones[0]["geometry"]["type"] == "Polygon");
  CHECK(zones[0]["properties"]["band"] == "primary");
  CHECK(zones[1]["geometry"]["type"] == "MultiPolygon");
  CHECK(zones[1]["geometry"]["coordinates"].size() == 2);
  CHECK(fc["metadata"]["procedure"] == "TEST");
  const auto route = features_of_kind(fc, "route");
  REQUIRE(route.size() == 1);
  CHECK(route[0]["geometry"]["coordinates"].size() == 2);
}

TEST_CASE("zone ring vertices classify into their own band") {
  const protection::ZoneConfig cfg;
  const GeoPoint t{30.593333, 103.954167};
  for (double brg : {0.0, 21.8, 95.0, 181.0, 300.0}) {
    for (double len : {3'000.0, 12'000.0, 31'000.0}) {
      const protection::Leg leg{t, geodesy::forward_point(t, {brg, len})};
      for (const auto& p : primary_ring(leg, cfg)) {
        REQUIRE(protection::classify_point(leg, p, cfg).band == protection::Band::Primary);
      }
      for (int side : {+1, -1}) {
        const auto ring = secondary_ring(leg, cfg, side);
        for (const auto& p : ring) {
          const auto cls = protection::classify_point(leg, p, cfg);
          REQUIRE(cls.band == protection::Band::Secondary);
          CHECK((cls.cross_track > 0) == (side > 0));
        }
        // Interior samples: geodesic midpoints between facing outer and inner vertices.
        const double split = (cfg.primary_half_width() + cfg.half_width) / 2;
        std::vector<std::pair<double, GeoPoint>> outer, inner;
        for (std::size_t k = 0; k + 1 < ring.size(); ++k) {
          const auto cls = protection::classify_point(leg, ring[k], cfg);
          (std::fabs(cls.cross_track) > split ? outer : inner).push_back({cls.along_track, ring[k]});
        }
        REQUIRE(outer.size() == inner.size());
        auto by_along = [](const auto& x, const auto& y) { return x.first < y.first; };
        std::sort(outer.begin(), outer.end(), by_along);
        std::sort(inner.begin(), inner.end(), by_along);
        for (std::size_t k = 0; k < outer.size(); ++k) {
          const GeoPoint& a = outer[k].second;
          const GeoPoint& b = inner[k].second;
          const PolarStep ab = geodesy::inverse(a, b);
          const GeoPoint mid = geodesy::forward_point(a, {ab.bearing, ab.distance / 2});
          CHECK(protection::classify_point(leg, mid, cfg).band == protection::Band::Secondary);
        }
      }
    }
  }
}

TEST_CASE("rings are closed and counter-clockwise") {
  const protection::ZoneConfig cfg;
  const protection::Leg leg{{30.0, 104.0}, geodesy::forward_point({30.0, 104.0}, {200.0, 22'000.0})};
  for (const auto& ring : {primary_ring(leg, cfg), secondary_ring(leg, cfg, 1), secondary_ring(leg, cfg, -1)}) {
    REQUIRE(ring.size() >= 4);
    CHECK(ring.front() == ring.back());
    double area = 0.0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
      area += ring[i].lon * ring[i + 1].lat - ring[i + 1].lon * ring[i].lat;
    }
    CHECK(area > 0.0);
  }
}

TEST_CASE("finished session snapshot") {
  DesignSession s = create_session(navdata(), "ZUUU", "02L", "GURET");
  ScriptedBackend backend;
  run_to_end(s, backend);
  const auto fc = nlohmann::json::parse(render_geojson(s));
  CHECK(features_of_kind(fc, "zone").size() == 2 * s.waypoints.size());
  CHECK(fc["metadata"]["status"] == to_string(s.status));
  for (const auto& o : features_of_kind(fc, "obstacle")) {
    CHECK(o["properties"].contains("elev_m"));
    CHECK(o["properties"]["notable"].is_boolean());
  }
}
