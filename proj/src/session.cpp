#include "fpd/session.hpp"

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fpd/error.hpp"
#include "fpd/geodesy.hpp"
#include "fpd/replay_backend.hpp"
#include "fpd/text_format.hpp"

namespace fpd {

using nlohmann::json;

namespace {

constexpr double kCoordScale = 1e6;  // committed waypoints carry 6 decimals

GeoPoint round_coordinates(const GeoPoint& p) {
  return {std::round(p.lat * kCoordScale) / kCoordScale, std::round(p.lon * kCoordScale) / kCoordScale,
          p.elevation};
}

std::string coords(const GeoPoint& p) { return "[" + compact(p.lat, 6) + "," + compact(p.lon, 6) + "]"; }

std::string coord_list(const std::vector<GeoPoint>& pts) {
  std::string out = "[";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ',';
    out += coords(pts[i]);
  }
  return out + "]";
}

std::string relative(const std::string& name, const PolarStep& s) {
  return "(name:" + name + ",relative position:" + fixed(s.bearing, 2) + "°,distance:" + fixed(s.distance, 1) +
         "m)";
}

void check_cancel(const std::stop_token& stop) {
  if (stop.stop_requested()) throw Error(ErrorKind::Cancelled, "step cancelled");
}

void push(DesignSession& s, Role role, std::string content, Payload parsed = {}) {
  s.transcript.push_back({role, std::move(content), s.round, std::move(parsed)});
}

double track_length(const DesignSession& s) {
  double total = 0.0;
  GeoPoint prev = s.runway().threshold;
  for (const auto& w : s.waypoints) {
    total += geodesy::distance(prev, w);
    prev = w;
  }
  return total;
}

std::string render_note(const DesignSession& s) {
  return "render: sid_runway_name:RWY" + s.runway().name + ", so_far_waypoints:" + coord_list(s.waypoints) +
         ", destination:" + s.destination().name + ", status:" + to_string(s.status);
}

// Pull a refined step back into the plan's bucket; true when it had to move.
bool clamp_into(const MetaAction& meta, PolarStep& st) {
  bool moved = false;
  if (octant_of(st.bearing) != meta.octant()) {
    const double lo = meta.azimuth_lower();
    const double hi = meta.azimuth_upper() - 0.1;
    st.bearing = geodesy::angular_difference(st.bearing, lo) <= geodesy::angular_difference(st.bearing, hi)
                     ? lo
                     : geodesy::normalize_bearing(hi);
    moved = true;
  }
  if (st.distance < meta.distance_lower()) {
    st.distance = std::max(meta.distance_lower(), 1.0);
    moved = true;
  } else if (st.distance >= meta.distance_upper()) {
    st.distance = meta.distance_upper() - 0.1;
    moved = true;
  }
  return moved;
}

template <typename Parsed, typename ParseFn>
Parsed ask(DesignSession& original, DesignSession& s, DecisionBackend& backend, Role role,
           const ChatRequest& req, const DecisionView& view, ParseFn parse) {
  for (int attempt = 0;; ++attempt) {
    ChatReply reply = backend.decide(role, req, view);
    try {
      Parsed parsed = parse(reply.text);
      Payload payload;
      if constexpr (std::is_same_v<Parsed, ParsedPosition>) {
        payload = parsed.step;
      } else {
        payload = parsed;
      }
      push(s, role, std::move(reply.text), std::move(payload));
      return parsed;
    } catch (const ParseError&) {
      push(s, role, std::move(reply.text));
      ++s.hallucinations[role];
      if (attempt >= 1) {
        s.status = SessionStatus::Failed;
        s.resume_status.reset();
        original = std::move(s);
        throw;
      }
    }
  }
}

void finish_round(DesignSession& s) {
  if (s.status == SessionStatus::Planning && s.round >= s.config().max_rounds) s.status = SessionStatus::Exhausted;
  push(s, Role::Render, render_note(s));
  if (s.config().interactive) {
    s.resume_status = s.status;
    s.status = SessionStatus::AwaitingFeedback;
  }
}

json point_json(const GeoPoint& p) { return json::array({p.lat, p.lon}); }

GeoPoint point_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json config_to_json(const SessionConfig& c) {
  return {{"max_rounds", c.max_rounds},
          {"first_leg_max_offset_deg", c.first_leg_max_offset},
          {"arrival_radius_m", c.arrival_radius},
          {"interactive", c.interactive},
          {"zone",
           {{"half_width_m", c.zone.half_width},
            {"primary_fraction", c.zone.primary_fraction},
            {"moc_gradient", c.zone.moc_gradient},
            {"moc_min_m", c.zone.moc_min},
            {"climb_gradient", c.zone.climb_gradient},
            {"notable_radius_m", c.zone.notable_radius}}}};
}

SessionConfig config_from_json(const json& j) {
  SessionConfig c;
  c.max_rounds = j.value("max_rounds", c.max_rounds);
  c.first_leg_max_offset = j.value("first_leg_max_offset_deg", c.first_leg_max_offset);
  c.arrival_radius = j.value("arrival_radius_m", c.arrival_radius);
  c.interactive = j.value("interactive", c.interactive);
  if (j.contains("zone")) {
    const auto& z = j["zone"];
    c.zone.half_width = z.value("half_width_m", c.zone.half_width);
    c.zone.primary_fraction = z.value("primary_fraction", c.zone.primary_fraction);
    c.zone.moc_gradient = z.value("moc_gradient", c.zone.moc_gradient);
    c.zone.moc_min = z.value("moc_min_m", c.zone.moc_min);
    c.zone.climb_gradient = z.value("climb_gradient", c.zone.climb_gradient);
    c.zone.notable_radius = z.value("notable_radius_m", c.zone.notable_radius);
  }
  return c;
}

json payload_to_json(const Payload& p) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, ParsedMetaAction>) {
          return {{"type", "meta_action"},
                  {"action", v.action.to_string()},
                  {"index", v.index ? json(*v.index) : json(nullptr)}};
        } else if constexpr (std::is_same_v<T, PolarStep>) {
          return {{"type", "polar_step"}, {"bearing", v.bearing}, {"distance", v.distance}};
        } else if constexpr (std::is_same_v<T, GeoPoint>) {
          return {{"type", "geo_point"}, {"lat", v.lat}, {"lon", v.lon}};
        } else if constexpr (std::is_same_v<T, FixCommand>) {
          json j = fix_command_to_json(v);
          j["type"] = "fix_command";
          return j;
        } else if constexpr (std::is_same_v<T, TaskSpec>) {
          json j = task_to_json(v);
          j["type"] = "task";
          return j;
        } else {
          json pts = json::array();
          for (const auto& w : v) pts.push_back(point_json(w));
          return {{"type", "waypoints"}, {"points", std::move(pts)}};
        }
      },
      p);
}

Payload payload_from_json(const json& j) {
  if (j.is_null()) return std::monostate{};
  const std::string type = j.at("type").get<std::string>();
  if (type == "meta_action") {
    ParsedMetaAction m = parse_meta_action(j.at("action").get<std::string>());
    m.index = j.at("index").is_null() ? std::nullopt : std::optional<int>(j["index"].get<int>());
    return m;
  }
  if (type == "polar_step") return PolarStep{j.at("bearing").get<double>(), j.at("distance").get<double>()};
  if (type == "geo_point") return GeoPoint{j.at("lat").get<double>(), j.at("lon").get<double>()};
  if (type == "fix_command") return fix_command_from_json(j);
  if (type == "task") return task_from_json(j);
  if (type == "waypoints") {
    std::vector<GeoPoint> pts;
    for (const auto& p : j.at("points")) pts.push_back(point_from(p));
    return pts;
  }
  throw ParseError("unknown payload type " + type);
}

}  // namespace

const char* to_string(SessionStatus status) {
  switch (status) {
    case SessionStatus::Planning: return "Planning";
    case SessionStatus::AwaitingFeedback: return "AwaitingFeedback";
    case SessionStatus::Completed: return "Completed";
    case SessionStatus::Exhausted: return "Exhausted";
    case SessionStatus::Failed: return "Failed";
  }
  return "?";
}

std::optional<SessionStatus> status_from_string(std::string_view name) {
  for (auto s : {SessionStatus::Planning, SessionStatus::AwaitingFeedback, SessionStatus::Completed,
                 SessionStatus::Exhausted, SessionStatus::Failed}) {
    if (name == to_string(s)) return s;
  }
  return std::nullopt;
}

void validate(const SessionConfig& cfg) {
  if (cfg.max_rounds < 1) throw Error(ErrorKind::InvalidArgument, "max_rounds must be at least 1");
  if (!(cfg.first_leg_max_offset > 0.0 && cfg.first_leg_max_offset < 90.0)) {
    throw Error(ErrorKind::InvalidArgument, "first_leg_max_offset must lie in (0, 90)");
  }
  if (!(cfg.arrival_radius >= 0.0) || !std::isfinite(cfg.arrival_radius)) {
    throw Error(ErrorKind::InvalidArgument, "arrival_radius must be finite and non-negative");
  }
  protection::validate(cfg.zone);
}

GeoPoint DesignSession::position() const { return waypoints.empty() ? runway().threshold : waypoints.back(); }

bool DesignSession::terminal() const noexcept {
  return status == SessionStatus::Completed || status == SessionStatus::Exhausted ||
         status == SessionStatus::Failed;
}

DesignSession create_session(const NavDatabase& db, std::string_view icao, std::string_view runway,
                             std::string_view destination, const SessionConfig& cfg,
                             std::shared_ptr<const PromptSet> prompts) {
  TaskSpec task{std::string(icao), std::string(runway), std::string(destination), "", cfg};
  return create_session(db, task, std::move(prompts));
}

DesignSession create_session(const NavDatabase& db, const TaskSpec& task, std::shared_ptr<const PromptSet> prompts) {
  validate(task.config);
  const Airport& airport = lookup_airport(db, task.icao);
  const Runway& runway = lookup_runway(db, task.icao, task.runway);
  const Fix& fix = lookup_fix(db, task.icao, task.destination);

  auto ctx = std::make_shared<DesignContext>();
  ctx->airport = airport;
  ctx->runway = runway;
  ctx->destination = fix;
  for (auto& e : build_memory(airport)) {
    if (e.runway == runway.name && e.destination == fix.name) continue;
    ctx->memory.push_back(std::move(e));
  }
  ctx->prompts = prompts ? std::move(prompts) : default_prompts();

  DesignSession s;
  s.context = std::move(ctx);
  s.task.icao = airport.icao;
  s.task.runway = runway.name;
  s.task.destination = fix.name;
  s.task.config = task.config;
  if (!task.procedure.empty()) {
    s.task.procedure = task.procedure;
  } else if (const auto* ref = find_procedure(airport, runway.name, fix.name)) {
    s.task.procedure = ref->name;
  } else {
    s.task.procedure = fix.name + "-" + runway.name;
  }
  push(s, Role::Task,
       "sid runway:RWY" + s.task.runway + ", destination:" + s.task.destination + ", procedure:" + s.task.procedure,
       s.task);
  return s;
}

void seed_waypoints(DesignSession& session, const std::vector<GeoPoint>& waypoints) {
  if (!session.waypoints.empty() || session.round != 0 || session.status != SessionStatus::Planning) {
    throw Error(ErrorKind::InvalidState, "waypoints can only be seeded into a fresh session");
  }
  if (static_cast<int>(waypoints.size()) > session.config().max_rounds) {
    throw Error(ErrorKind::InvalidArgument, "more seeded waypoints than rounds");
  }
  for (const auto& w : waypoints) {
    if (!is_valid(w)) throw Error(ErrorKind::InvalidArgument, "invalid seeded waypoint");
  }
  DesignSession s = session;
  s.waypoints = waypoints;
  push(s, Role::Tool, "Finished waypoints: " + coord_list(waypoints), waypoints);
  s.round = static_cast<int>(waypoints.size());
  if (s.round >= s.config().max_rounds) s.status = SessionStatus::Exhausted;
  session = std::move(s);
}

DecisionView decision_view(const DesignSession& s, Role role, std::optional<MetaAction> meta) {
  DecisionView v;
  v.role = role;
  v.round = s.round;
  v.procedure = s.task.procedure;
  v.runway = s.runway().name;
  v.runway_heading = s.runway().heading;
  v.position = s.position();
  v.destination_name = s.destination().name;
  v.destination = {geodesy::initial_bearing(v.position, s.destination().position),
                   geodesy::distance(v.position, s.destination().position)};
  v.notable = protection::notable_obstacles(v.position, s.runway().der_elevation, s.context->airport.obstacles,
                                            s.config().zone, track_length(s));
  v.same_runway = similar_same_runway(s.context->memory, s.runway().name, s.destination().position);
  v.same_destination = similar_same_destination(s.context->memory, s.destination().name, s.runway().heading);
  v.arrival_radius = s.config().arrival_radius;
  v.meta = meta;
  return v;
}

ChatRequest plan_request(const DesignSession& s, const DecisionView& v) {
  const int index = v.round + 1;
  std::string user;
  user += "the planning sid procedure name:" + v.procedure + "\n";
  user += "sid runway:RWY" + v.runway + ".\n";
  user += "runway heading:" + compact(v.runway_heading, 2) + "°.\n";
  user += "runway name:" + v.runway + ".\n";
  user += "destination:" + relative(v.destination_name, v.destination) + "\n";
  user += "similar sid procedure path from same sid runway: " +
          (v.same_runway ? format_similar_procedure(v.same_runway->entry) : std::string("none")) + "\n";
  user += "similar sid procedure path from same destination: " +
          (v.same_destination ? format_similar_procedure(v.same_destination->entry) : std::string("none")) + "\n";
  user += "notable obstacles:" + protection::format_notable_list(v.notable) + "\n";
  user += "finished waypoints:" + coord_list(s.waypoints) + "\n";
  user += "mission goal:plan " + ordinal(index) + " waypoint relative position\n";
  ChatRequest req;
  req.messages = {{"system", s.context->prompts->decision_system_prompt(Role::Plan)}, {"user", std::move(user)}};
  return req;
}

ChatRequest waypoint_request(const DesignSession& s, const DecisionView& v) {
  const int index = v.round + 1;
  std::string user;
  user += "Meta Action:" + format_meta_line(index, v.meta.value_or(MetaAction::arrival())) + "\n";
  user += "destination:" + relative(v.destination_name, v.destination) + "\n";
  user += "notable obstacles:" + protection::format_notable_list(v.notable) + "\n";
  user += "mission goal:plan " + ordinal(index) + " waypoint accurate position\n";
  ChatRequest req;
  req.messages = {{"system", s.context->prompts->decision_system_prompt(Role::Waypoint)},
                  {"user", std::move(user)}};
  return req;
}

StepOutcome step(DesignSession& session, DecisionBackend& backend, std::stop_token stop) {
  if (session.status != SessionStatus::Planning) {
    throw Error(ErrorKind::InvalidState, std::string("cannot step a session in status ") + to_string(session.status));
  }
  if (session.round >= session.config().max_rounds) throw Error(ErrorKind::InvalidState, "round limit reached");

  DesignSession s = session;
  StepOutcome out;
  out.transcript_begin = s.transcript.size();
  const Fix& dest = s.destination();

  push(s, Role::GroupManager, "next speaker: PlanAgent");
  const DecisionView plan_view = decision_view(s, Role::Plan);
  const auto plan = ask<ParsedMetaAction>(session, s, backend, Role::Plan, plan_request(s, plan_view), plan_view,
                                          [](const std::string& t) { return parse_meta_action(t); });
  check_cancel(stop);

  if (plan.action.is_arrival()) {
    const bool near = !s.waypoints.empty() &&
                      geodesy::distance(s.waypoints.back(), dest.position) <= s.config().arrival_radius;
    if (near) {
      s.waypoints.back() = dest.position;
    } else {
      s.waypoints.push_back(dest.position);
    }
    out.new_waypoint = dest.position;
    ++s.round;
    s.status = SessionStatus::Completed;
    finish_round(s);
    session = std::move(s);
    return out;
  }

  const DecisionView wp_view = decision_view(s, Role::Waypoint, plan.action);
  const auto refined = ask<ParsedPosition>(session, s, backend, Role::Waypoint, waypoint_request(s, wp_view),
                                           wp_view, [](const std::string& t) { return parse_precise_position(t); });
  check_cancel(stop);

  PolarStep st = refined.step;
  const bool clamped = clamp_into(plan.action, st);
  if (clamped) ++s.clamp_events;
  const GeoPoint origin = s.position();
  const GeoPoint computed = round_coordinates(geodesy::forward_point(origin, st));
  std::string call = "calculate_new_lat_lon({\"origin_lat\":" + compact(origin.lat, 6) +
                     ",\"origin_lon\":" + compact(origin.lon, 6) + ",\"bearing\":" + compact(st.bearing, 6) +
                     ",\"distance\":" + compact(st.distance, 6) + "}) = " + coords(computed);
  if (clamped) call += " (step clamped into " + plan.action.to_string() + ")";
  push(s, Role::Calculate, std::move(call), computed);
  check_cancel(stop);

  GeoPoint committed = computed;
  ++s.round;
  if (geodesy::distance(computed, dest.position) <= s.config().arrival_radius) {
    committed = dest.position;
    s.status = SessionStatus::Completed;
  }
  s.waypoints.push_back(committed);
  out.new_waypoint = committed;
  finish_round(s);
  session = std::move(s);
  return out;
}

void apply_fix(DesignSession& session, const FixCommand& cmd) {
  if (session.status != SessionStatus::AwaitingFeedback) {
    throw Error(ErrorKind::InvalidState, "feedback is only accepted while awaiting feedback");
  }
  DesignSession s = session;
  push(s, Role::User, format_fix_command(cmd), cmd);
  push(s, Role::GroupManager, "next speaker: FixWaypointAgent");

  if (cmd.action == FixCommand::Action::NoFix) {
    s.status = s.resume_status.value_or(SessionStatus::Planning);
    s.resume_status.reset();
    push(s, Role::FixWaypoint, "fixwaypointbyHF(action:no fix)");
    session = std::move(s);
    return;
  }

  const int n = static_cast<int>(s.waypoints.size());
  if (cmd.fix_waypoint < 1 || cmd.fix_waypoint > n) {
    throw Error(ErrorKind::IndexOutOfRange,
                "fix_waypoint " + std::to_string(cmd.fix_waypoint) + " outside 1.." + std::to_string(n));
  }
  const PolarStep st = make_step(cmd.bearing, cmd.distance);
  GeoPoint anchor = cmd.fix_waypoint == 1 ? s.runway().threshold : s.waypoints[cmd.fix_waypoint - 2];
  if (cmd.last_waypoint_lat && cmd.last_waypoint_lon) {
    anchor = {*cmd.last_waypoint_lat, *cmd.last_waypoint_lon};
    if (!is_valid(anchor)) throw Error(ErrorKind::InvalidStep, "fix anchor is not a valid position");
  }
  const GeoPoint fixed_point = round_coordinates(geodesy::forward_point(anchor, st));
  s.waypoints.resize(cmd.fix_waypoint);
  s.waypoints.back() = fixed_point;

  if (geodesy::distance(fixed_point, s.destination().position) <= s.config().arrival_radius) {
    s.status = SessionStatus::Completed;
  } else if (s.round >= s.config().max_rounds) {
    s.status = SessionStatus::Exhausted;
  } else {
    s.status = SessionStatus::Planning;
  }
  s.resume_status.reset();
  push(s, Role::FixWaypoint,
       "fixwaypointbyHF(action:fix, last_waypoint_lat:" + compact(anchor.lat, 6) + ", last_waypoint_lon:" +
           compact(anchor.lon, 6) + ", fix_bearing:" + compact(st.bearing, 6) + ", fix_distance:" +
           compact(st.distance, 6) + ") = " + coords(fixed_point),
       fixed_point);
  session = std::move(s);
}

double first_leg_offset(const Runway& runway, const GeoPoint& first_waypoint) {
  return geodesy::angular_difference(geodesy::inverse(runway.threshold, first_waypoint).bearing, runway.heading);
}

bool first_leg_compliant(const Runway& runway, const GeoPoint& first_waypoint, double max_offset) {
  return first_leg_offset(runway, first_waypoint) <= max_offset;
}

bool first_leg_compliant(const DesignSession& session) {
  if (session.waypoints.empty()) throw Error(ErrorKind::InvalidState, "no first leg yet");
  return first_leg_compliant(session.runway(), session.waypoints.front(), session.config().first_leg_max_offset);
}

json message_to_json(const Message& m) {
  return {{"role", to_string(m.role)}, {"round", m.round}, {"content", m.content}, {"parsed", payload_to_json(m.parsed)}};
}

Message message_from_json(const json& j) {
  Message m;
  const auto role = role_from_string(j.at("role").get<std::string>());
  if (!role) throw ParseError("unknown role " + j["role"].get<std::string>());
  m.role = *role;
  m.round = j.at("round").get<int>();
  m.content = j.at("content").get<std::string>();
  m.parsed = payload_from_json(j.contains("parsed") ? j["parsed"] : json(nullptr));
  return m;
}

std::string transcript_to_jsonl(const std::vector<Message>& transcript) {
  std::string out;
  for (const auto& m : transcript) {
    out += message_to_json(m).dump();
    out += '\n';
  }
  return out;
}

std::vector<Message> transcript_from_jsonl(std::string_view text) {
  std::vector<Message> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(message_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ParseError("transcript line " + std::to_string(n) + ": " + e.what(), n);
    } catch (const Error& e) {
      throw ParseError("transcript line " + std::to_string(n) + ": " + e.what(), n);
    }
  }
  return out;
}

DesignSession replay_session(const NavDatabase& db, const std::vector<Message>& transcript,
                             std::shared_ptr<const PromptSet> prompts) {
  const TaskSpec* task = nullptr;
  for (const auto& m : transcript) {
    if (m.role == Role::Task && std::holds_alternative<TaskSpec>(m.parsed)) {
      task = &std::get<TaskSpec>(m.parsed);
      break;
    }
  }
  if (task == nullptr) throw ParseError("transcript has no task message");

  DesignSession s = create_session(db, *task, std::move(prompts));
  std::vector<FixCommand> fixes;
  for (const auto& m : transcript) {
    if (m.role == Role::Tool && std::holds_alternative<std::vector<GeoPoint>>(m.parsed) && s.round == 0 &&
        s.waypoints.empty()) {
      seed_waypoints(s, std::get<std::vector<GeoPoint>>(m.parsed));
    }
    if (m.role == Role::User && std::holds_alternative<FixCommand>(m.parsed)) {
      fixes.push_back(std::get<FixCommand>(m.parsed));
    }
  }

  ReplayBackend backend(script_from_transcript(transcript));
  std::size_t next_fix = 0;
  while (true) {
    if (s.status == SessionStatus::Planning && s.round < s.config().max_rounds && backend.remaining() > 0) {
      try {
        step(s, backend);
      } catch (const ParseError&) {
        break;
      }
    } else if (s.status == SessionStatus::AwaitingFeedback && next_fix < fixes.size()) {
      apply_fix(s, fixes[next_fix++]);
    } else {
      break;
    }
  }
  return s;
}

json task_to_json(const TaskSpec& t) {
  return {{"icao", t.icao},
          {"runway", t.runway},
          {"destination", t.destination},
          {"procedure", t.procedure},
          {"config", config_to_json(t.config)}};
}

TaskSpec task_from_json(const json& j) {
  TaskSpec t;
  t.icao = j.at("icao").get<std::string>();
  t.runway = j.at("runway").get<std::string>();
  t.destination = j.at("destination").get<std::string>();
  t.procedure = j.value("procedure", std::string());
  if (j.contains("config")) t.config = config_from_json(j["config"]);
  return t;
}

json session_to_json(const DesignSession& s) {
  json wps = json::array();
  for (const auto& w : s.waypoints) wps.push_back(point_json(w));
  json transcript = json::array();
  for (const auto& m : s.transcript) transcript.push_back(message_to_json(m));
  json halluc = json::object();
  for (const auto& [role, n] : s.hallucinations) halluc[to_string(role)] = n;
  return {{"task", task_to_json(s.task)},
          {"round", s.round},
          {"status", to_string(s.status)},
          {"resume_status", s.resume_status ? json(to_string(*s.resume_status)) : json(nullptr)},
          {"threshold", point_json(s.runway().threshold)},
          {"runway_heading_deg", s.runway().heading},
          {"destination", point_json(s.destination().position)},
          {"waypoints", std::move(wps)},
          {"hallucinations", std::move(halluc)},
          {"clamp_events", s.clamp_events},
          {"transcript", std::move(transcript)}};
}

}  // namespace fpd
