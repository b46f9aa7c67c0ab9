#include <cmath>
#include <stop_token>

#include <doctest.h>

#include "fpd/error.hpp"
#include "fpd/export_render.hpp"
#include "fpd/geodesy.hpp"
#include "fpd/scripted_backend.hpp"
#include "oracle.hpp"
#include "support.hpp"

using namespace fpd;
using namespace testing_support;

namespace {

double round6(double v) { return std::round(v * 1e6) / 1e6; }

std::vector<Role> roles_since(const DesignSession& s, std::size_t begin) {
  std::vector<Role> out;
  for (std::size_t i = begin; i < s.transcript.size(); ++i) out.push_back(s.transcript[i].role);
  return out;
}

// Always heads away from the destination in short hops.
LambdaBackend wandering_backend() {
  return LambdaBackend([](Role role, const DecisionView&) -> std::string {
    if (role == Role::Plan) return "Thoughts:\n -keep south\nMeta Action:(180-225°,0-10km)";
    return "Thoughts:\n -south\nAccurate waypoint position:(200.0°,5000.0m)";
  });
}

DesignSession interactive_session() {
  SessionConfig cfg;
  cfg.interactive = true;
  return create_session(navdata(), "ZUUU", "02L", "GURET", cfg);
}

void step_and_continue(DesignSession& s, DecisionBackend& backend, int rounds) {
  for (int i = 0; i < rounds; ++i) {
    step(s, backend);
    REQUIRE(s.status == SessionStatus::AwaitingFeedback);
    apply_fix(s, FixCommand::no_fix());
  }
}

}  // namespace

TEST_CASE("create_session resolves inputs and records the task") {
  const DesignSession s = create_session(navdata(), "zuuu", "02l", "guret");
  CHECK(s.task.icao == "ZUUU");
  CHECK(s.task.procedure == "GURET-9W");
  CHECK(s.status == SessionStatus::Planning);
  REQUIRE(s.transcript.size() == 1);
  CHECK(s.transcript[0].role == Role::Task);
  CHECK(std::holds_alternative<TaskSpec>(s.transcript[0].parsed));
  // The procedure being designed is left out of its own memory.
  for (const auto& e : s.context->memory) CHECK_FALSE((e.runway == "02L" && e.destination == "GURET"));

  const DesignSession again = create_session(navdata(), "ZUUU", "02L", "GURET");
  CHECK(session_to_json(s) == session_to_json(again));

  CHECK_THROWS_AS(create_session(navdata(), "ZUUU", "02L", "XXXXX"), NotFound);
  SessionConfig bad;
  bad.max_rounds = 0;
  CHECK_THROWS_AS(create_session(navdata(), "ZUUU", "02L", "GURET", bad), Error);
}

TEST_CASE("recorded round replays to the recorded calculator output") {
  DesignSession s = recorded_round_session();
  CHECK(s.round == 3);
  ReplayBackend backend(recorded_round_script());
  const auto out = step(s, backend);
  REQUIRE(out.new_waypoint);
  CHECK(out.new_waypoint->lat == 31.025817);
  CHECK(out.new_waypoint->lon == 104.262205);
  REQUIRE(s.waypoints.size() == 4);
  CHECK(s.waypoints[3] == *out.new_waypoint);
  CHECK(s.round == 4);
  CHECK(s.status == SessionStatus::Planning);
  CHECK(roles_since(s, out.transcript_begin) ==
        std::vector<Role>{Role::GroupManager, Role::Plan, Role::Waypoint, Role::Calculate, Role::Render});
  const Message& calc = s.transcript[out.transcript_begin + 3];
  CHECK(calc.content.find("[31.025817,104.262205]") != std::string::npos);
  CHECK(std::get<GeoPoint>(calc.parsed) == *out.new_waypoint);
  CHECK(backend.remaining() == 0);
  CHECK(s.hallucinations.empty());
}

TEST_CASE("plan prompt carries the destination relation and retrieved traces") {
  DesignSession s = recorded_round_session();
  const DecisionView v = decision_view(s, Role::Plan);
  CHECK(v.destination.bearing == doctest::Approx(68.04).epsilon(2e-4));
  CHECK(v.destination.distance == doctest::Approx(124'358.4).epsilon(1e-5));
  // Brute-force picks over the leave-one-out memory, measured with the oracle.
  const auto& memory = s.context->memory;
  const ExperienceEntry* nearest = nullptr;
  const ExperienceEntry* aligned = nullptr;
  double best_gap = 1e300, best_turn = 1e300;
  const oracle::LatLon guret{s.destination().position.lat, s.destination().position.lon};
  for (const auto& e : memory) {
    if (e.runway == "02L") {
      const double gap = std::max(oracle::inverse({e.terminal_point.lat, e.terminal_point.lon}, guret).distance, 1.0);
      if (gap < best_gap) best_gap = gap, nearest = &e;
    }
    if (e.destination == "GURET") {
      const double turn = std::max(oracle::bearing_gap(e.runway_heading, 21.8), 0.1);
      if (turn < best_turn) best_turn = turn, aligned = &e;
    }
  }
  REQUIRE(nearest);
  REQUIRE(aligned);
  REQUIRE(v.same_runway);
  CHECK(v.same_runway->entry.procedure == nearest->procedure);
  CHECK(v.same_runway->score == doctest::Approx(1.0 / best_gap).epsilon(1e-9));
  REQUIRE(v.same_destination);
  CHECK(v.same_destination->entry.procedure == aligned->procedure);
  const ChatRequest req = plan_request(s, v);
  REQUIRE(req.messages.size() == 2);
  CHECK(req.messages[0].role == "system");
  const std::string& user = req.messages[1].content;
  CHECK(user.find("runway heading:21.8°") != std::string::npos);
  CHECK(user.find("(name:GURET,relative position:68.04°,distance:124358.4m)") != std::string::npos);
  CHECK(user.find("sid runway:02L,destination:" + nearest->destination + ",procedure path:" +
                  format_trace_for_prompt(*nearest)) != std::string::npos);
}

TEST_CASE("scripted round zero respects the first-leg limit") {
  DesignSession s = create_session(navdata(), "ZUUU", "02L", "GURET");
  ScriptedBackend backend;
  step(s, backend);
  REQUIRE(s.waypoints.size() == 1);
  const double brg = geodesy::inverse(s.runway().threshold, s.waypoints[0]).bearing;
  CHECK(geodesy::angular_difference(brg, 21.8) <= 15.0);
  CHECK(first_leg_compliant(s));
}

TEST_CASE("eight rounds without arrival exhaust the session") {
  DesignSession s = create_session(navdata(), "ZUUU", "02L", "GURET");
  auto backend = wandering_backend();
  for (int i = 0; i < 8; ++i) {
    REQUIRE(s.status == SessionStatus::Planning);
    step(s, backend);
  }
  CHECK(s.status == SessionStatus::Exhausted);
  CHECK(s.round == 8);
  CHECK(s.waypoints.size() == 8);
  CHECK_THROWS_AS(step(s, backend), Error);
  CHECK(s.round == 8);
}

TEST_CASE("arrival decisions") {
  SUBCASE("arrival appends the destination") {
    DesignSession s = recorded_round_session();
    LambdaBackend backend([](Role, const DecisionView&) { return std::string("Meta Action:arrival destination!"); });
    const auto out = step(s, backend);
    CHECK(s.status == SessionStatus::Completed);
    CHECK(s.waypoints.size() == 4);
    CHECK(s.waypoints.back() == s.destination().position);
    CHECK(roles_since(s, out.transcript_begin) == std::vector<Role>{Role::GroupManager, Role::Plan, Role::Render});
  }
  SUBCASE("a computed point next to the fix snaps onto it") {
    DesignSession s = recorded_round_session();
    const PolarStep to_fix = geodesy::inverse(s.position(), s.destination().position);
    LambdaBackend backend([&](Role role, const DecisionView&) -> std::string {
      if (role == Role::Plan) return "Meta Action:(45-90°,50+km)";
      return "Accurate waypoint position:" + format_position({std::round(to_fix.bearing * 10.0) / 10.0,
                                                              std::round(to_fix.distance - 500.0)});
    });
    step(s, backend);
    CHECK(s.status == SessionStatus::Completed);
    CHECK(s.waypoints.back() == s.destination().position);
  }
}

TEST_CASE("waypoint reply outside the planned bucket is pulled back in") {
  DesignSession s = create_session(navdata(), "ZUUU", "02L", "GURET");
  LambdaBackend backend([](Role role, const DecisionView&) -> std::string {
    if (role == Role::Plan) return "Meta Action:1st waypoint:(0-45°,0-10km)";
    return "Accurate waypoint position:(60.0°,15000.0m)";
  });
  step(s, backend);
  CHECK(s.clamp_events == 1);
  const PolarStep st = geodesy::inverse(s.runway().threshold, s.waypoints[0]);
  CHECK(st.bearing < 45.0);
  CHECK(st.distance < 10'000.0);
}

TEST_CASE("one malformed reply is retried, two fail the session") {
  SUBCASE("retry succeeds") {
    DesignSession s = recorded_round_session();
    ReplayBackend backend({{Role::Plan, "I am not sure where to go"},
                           {Role::Plan, fixture("round4_plan.txt")},
                           {Role::Waypoint, fixture("round4_waypoint.txt")}});
    step(s, backend);
    CHECK(s.waypoints.back() == GeoPoint{31.025817, 104.262205});
    CHECK(s.hallucinations.at(Role::Plan) == 1);
  }
  SUBCASE("second failure") {
    DesignSession s = recorded_round_session();
    ReplayBackend backend({{Role::Plan, fixture("round4_plan.txt")},
                           {Role::Waypoint, "two options: (10.0°,20000.0m) or (30.0°,25000.0m)"},
                           {Role::Waypoint, "Accurate waypoint position: undecided"}});
    CHECK_THROWS_AS(step(s, backend), ParseError);
    CHECK(s.status == SessionStatus::Failed);
    CHECK(s.hallucinations.at(Role::Waypoint) == 2);
    CHECK(s.waypoints.size() == 3);
    CHECK_THROWS_AS(step(s, backend), Error);
  }
}

TEST_CASE("backend failure and cancellation leave the session untouched") {
  DesignSession s = recorded_round_session();
  const nlohmann::json before = session_to_json(s);

  ReplayBackend empty({});
  CHECK_THROWS_AS(step(s, empty), ScriptExhausted);
  CHECK(session_to_json(s) == before);

  ReplayBackend wrong_role({{Role::Waypoint, fixture("round4_waypoint.txt")}});
  CHECK_THROWS_AS(step(s, wrong_role), MalformedReply);
  CHECK(session_to_json(s) == before);

  std::stop_source stop;
  stop.request_stop();
  ReplayBackend backend(recorded_round_script());
  try {
    step(s, backend, stop.get_token());
    FAIL("expected cancellation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Cancelled);
  }
  CHECK(session_to_json(s) == before);
}

TEST_CASE("interactive sessions pause after every round") {
  DesignSession s = interactive_session();
  ScriptedBackend backend;
  step(s, backend);
  CHECK(s.status == SessionStatus::AwaitingFeedback);
  CHECK(s.resume_status == SessionStatus::Planning);
  CHECK_THROWS_AS(step(s, backend), Error);
}

TEST_CASE("supervisor fix replaces the waypoint and truncates successors") {
  DesignSession s = interactive_session();
  ScriptedBackend backend;
  step_and_continue(s, backend, 2);
  step(s, backend);
  REQUIRE(s.waypoints.size() == 3);
  const int round = s.round;

  apply_fix(s, parse_fix_command("1st waypoint fix, fix_bearing:21.9, fix_distance:3551.4"));
  const auto expect = oracle::forward({30.593333, 103.954167}, 21.9, 3551.4);
  REQUIRE(s.waypoints.size() == 1);
  CHECK(s.waypoints[0].lat == round6(expect.lat));
  CHECK(s.waypoints[0].lon == round6(expect.lon));
  CHECK(s.waypoints[0].lat == doctest::Approx(30.62297).epsilon(1e-6));
  CHECK(s.waypoints[0].lon == doctest::Approx(103.96801).epsilon(1e-6));
  CHECK(s.round == round);
  CHECK(s.status == SessionStatus::Planning);
  CHECK(roles_since(s, s.transcript.size() - 3) ==
        std::vector<Role>{Role::User, Role::GroupManager, Role::FixWaypoint});
  CHECK(std::get<FixCommand>(s.transcript[s.transcript.size() - 3].parsed).bearing == 21.9);

  // Re-planning continues from the fixed point.
  step(s, backend);
  CHECK(s.waypoints.size() == 2);
}

TEST_CASE("fix with an explicit anchor") {
  DesignSession s = interactive_session();
  ScriptedBackend backend;
  step_and_continue(s, backend, 1);
  step(s, backend);
  FixCommand cmd = FixCommand::fix(2, 90.0, 10'000.0);
  cmd.last_waypoint_lat = 30.7;
  cmd.last_waypoint_lon = 104.0;
  apply_fix(s, cmd);
  const auto expect = oracle::forward({30.7, 104.0}, 90.0, 10'000.0);
  CHECK(s.waypoints[1].lat == round6(expect.lat));
  CHECK(s.waypoints[1].lon == round6(expect.lon));
}

TEST_CASE("no_fix changes nothing but the status") {
  DesignSession s = interactive_session();
  ScriptedBackend backend;
  step(s, backend);
  const auto waypoints = s.waypoints;
  const int round = s.round;
  apply_fix(s, FixCommand::no_fix());
  CHECK(s.waypoints == waypoints);
  CHECK(s.round == round);
  CHECK(s.status == SessionStatus::Planning);
  CHECK_FALSE(s.resume_status);

  CHECK_THROWS_AS(apply_fix(s, FixCommand::no_fix()), Error);
}

TEST_CASE("no_fix on a finished design keeps it finished") {
  DesignSession s = interactive_session();
  LambdaBackend backend([](Role, const DecisionView&) { return std::string("Meta Action:arrival destination!"); });
  step(s, backend);
  CHECK(s.status == SessionStatus::AwaitingFeedback);
  CHECK(s.resume_status == SessionStatus::Completed);
  apply_fix(s, FixCommand::no_fix());
  CHECK(s.status == SessionStatus::Completed);
}

TEST_CASE("invalid fixes") {
  DesignSession s = interactive_session();
  ScriptedBackend backend;
  step_and_continue(s, backend, 2);
  step(s, backend);
  const auto before = session_to_json(s);
  CHECK_THROWS_AS(apply_fix(s, FixCommand::fix(5, 10.0, 1000.0)), Error);
  try {
    apply_fix(s, FixCommand::fix(5, 10.0, 1000.0));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IndexOutOfRange);
  }
  try {
    apply_fix(s, FixCommand::fix(1, 10.0, -5.0));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidStep);
  }
  CHECK(session_to_json(s) == before);
}

TEST_CASE("first-leg compliance") {
  Runway r;
  r.threshold = {30.593333, 103.954167};
  r.heading = 21.8;
  auto at = [&](double brg) { return geodesy::forward_point(r.threshold, {brg, 5000.0}); };
  CHECK(first_leg_compliant(r, at(21.9), 15.0));
  CHECK_FALSE(first_leg_compliant(r, at(40.0), 15.0));
  CHECK(first_leg_offset(r, at(40.0)) == doctest::Approx(18.2).epsilon(1e-6));
  r.heading = 350.0;
  CHECK(first_leg_compliant(r, at(4.0), 15.0));
  CHECK(first_leg_offset(r, at(4.0)) == doctest::Approx(14.0).epsilon(1e-6));
}

TEST_CASE("transcript JSON Lines round-trip") {
  DesignSession s = recorded_round_session();
  ReplayBackend backend(recorded_round_script());
  step(s, backend);
  const std::string jsonl = transcript_to_jsonl(s.transcript);
  const auto back = transcript_from_jsonl(jsonl);
  CHECK(back == s.transcript);
  CHECK(transcript_to_jsonl(back) == jsonl);
  try {
    transcript_from_jsonl(jsonl + "{broken\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == static_cast<int>(s.transcript.size()) + 1);
  }
}

TEST_CASE("replaying a transcript reproduces the session") {
  DesignSession original = interactive_session();
  ScriptedBackend backend;
  step_and_continue(original, backend, 2);
  step(original, backend);
  apply_fix(original, FixCommand::fix(2, 60.0, 12'000.0));
  run_to_end(original, backend);
  while (original.status == SessionStatus::AwaitingFeedback) {
    apply_fix(original, FixCommand::no_fix());
    run_to_end(original, backend);
  }

  const auto transcript = transcript_from_jsonl(transcript_to_jsonl(original.transcript));
  const DesignSession a = replay_session(navdata(), transcript);
  const DesignSession b = replay_session(navdata(), transcript);
  CHECK(a.waypoints == original.waypoints);
  CHECK(a.status == original.status);
  CHECK(transcript_to_jsonl(a.transcript) == transcript_to_jsonl(original.transcript));
  CHECK(export_txt(a) == export_txt(b));
  CHECK(export_txt(a) == export_txt(original));
}
