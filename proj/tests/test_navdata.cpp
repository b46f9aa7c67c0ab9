#include <doctest.h>

#include "fpd/error.hpp"
#include "fpd/navdata.hpp"
#include "support.hpp"

using namespace fpd;
using testing_support::navdata;

namespace {

std::string one_airport(const std::string& procedure_runway, const std::string& last_wp = "[30.1, 104.1]") {
  return R"({"airports":[{"icao":"ZXXX",
    "runways":[{"name":"02L","lat":30.0,"lon":104.0,"heading_deg":21.8,"der_elev_m":500}],
    "fixes":[{"name":"ABC","lat":30.1,"lon":104.1}],
    "obstacles":[{"name":"O1","lat":30.05,"lon":104.02,"elev_m":900}],
    "procedures":[{"name":"ABC-1A","runway":")" +
         procedure_runway + R"(","destination":"ABC","waypoints":[[30.05,104.05],)" + last_wp + "]}]}]}";
}

}  // namespace

TEST_CASE("shipped dataset holds both airports") {
  const auto& db = navdata();
  REQUIRE(db.airports.size() == 2);
  CHECK(db.airports[0].icao == "ZUUU");
  CHECK(db.airports[1].icao == "ZUCK");
  CHECK(lookup_airport(db, "zuck").icao == "ZUCK");
}

TEST_CASE("runway lookup is case-insensitive") {
  const auto& db = navdata();
  const Runway& r = lookup_runway(db, "ZUUU", "02L");
  CHECK(r.heading == doctest::Approx(21.8));
  CHECK(lookup_runway(db, "ZUUU", " 02l ") == r);
  CHECK_THROWS_AS(lookup_runway(db, "ZUUU", "36R"), NotFound);
}

TEST_CASE("fix lookup") {
  const auto& db = navdata();
  const Fix& f = lookup_fix(db, "ZUUU", "GURET");
  CHECK(f.name == "GURET");
  CHECK(lookup_fix(db, "ZUUU", f.name).position == f.position);
  CHECK_THROWS_AS(lookup_fix(db, "ZUUU", "NOPE"), NotFound);
  CHECK_THROWS_AS(lookup_airport(db, "KJFK"), NotFound);
}

TEST_CASE("procedure lookup by runway and destination") {
  const Airport& a = lookup_airport(navdata(), "ZUUU");
  const ReferenceProcedure* p = find_procedure(a, "02L", "GURET");
  REQUIRE(p != nullptr);
  CHECK(p->name == "GURET-9W");
  CHECK(find_procedure(a, "02L", "NOPE") == nullptr);
}

TEST_CASE("parse small database") {
  const NavDatabase db = parse_database(one_airport("02L"));
  REQUIRE(db.airports.size() == 1);
  const Airport& a = db.airports[0];
  CHECK(a.runways[0].der_elevation == 500.0);
  CHECK(a.runways[0].threshold.elevation == 500.0);
  CHECK(a.obstacles[0].elevation == 900.0);
  CHECK(a.procedures[0].waypoints.size() == 2);
}

TEST_CASE("empty airport list is an empty database") {
  CHECK(parse_database(R"({"airports":[]})").airports.empty());
}

TEST_CASE("procedure naming an unknown runway is a reference error") {
  try {
    parse_database(one_airport("99X"));
    FAIL("expected ReferenceError");
  } catch (const ReferenceError& e) {
    CHECK(e.key() == "99X");
    CHECK(std::string(e.what()).find("99X") != std::string::npos);
  }
}

TEST_CASE("schema and syntax errors") {
  CHECK_THROWS_AS(parse_database("{not json"), ParseError);
  CHECK_THROWS_AS(parse_database(R"({"airports":{}})"), SchemaError);
  try {
    parse_database(R"({"airports":[{"icao":"ZXXX","runways":[{"name":"02L","lat":95,"lon":0,"heading_deg":0,"der_elev_m":0}],"fixes":[],"obstacles":[],"procedures":[]}]})");
    FAIL("expected SchemaError");
  } catch (const SchemaError& e) {
    CHECK(e.path() == "$.airports[0].runways[0].lat");
  }
  // Last waypoint far from the destination fix.
  CHECK_THROWS_AS(parse_database(one_airport("02L", "[30.2, 104.3]")), SchemaError);
}

TEST_CASE("identifier normalization") {
  CHECK(normalize_identifier("  guret\t") == "GURET");
  CHECK(normalize_identifier("02l") == "02L");
}
