#include <cmath>

#include "fpd/error.hpp"
#include "fpd/geodesy.hpp"
#include "fpd/replay_backend.hpp"
#include "fpd/scripted_backend.hpp"
#include "fpd/session.hpp"
#include "fpd/text_format.hpp"

namespace fpd {

namespace {

constexpr double kBucketMargin = 100.0;  // meters kept clear of a band edge
constexpr double kOctantHalf = 22.5;

double round1(double x) { return std::round(x * 10.0) / 10.0; }

const char* basis_text(PlanBasis b) {
  switch (b) {
    case PlanBasis::Arrival: return "destination reached";
    case PlanBasis::FinalStep: return "direct step onto the destination";
    case PlanBasis::RunwayHeading: return "first leg along the runway heading";
    case PlanBasis::TraceReuse: return "following the same-runway reference trace";
    case PlanBasis::Greedy: return "heading for the destination";
  }
  return "";
}

// Approximate miss distance when a step of `d` at `bearing` aims at a target
// `remaining` away on bearing `target` (planar law of cosines).
double miss_distance(double remaining, double target, double bearing, double d) {
  const double a = geodesy::angular_difference(target, bearing) * M_PI / 180.0;
  return std::sqrt(std::max(0.0, remaining * remaining + d * d - 2.0 * remaining * d * std::cos(a)));
}

}  // namespace

const char* to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::Remote: return "remote";
    case BackendKind::Scripted: return "scripted";
    case BackendKind::Replay: return "replay";
  }
  return "?";
}

std::optional<BackendKind> backend_kind_from_string(std::string_view name) {
  for (auto k : {BackendKind::Remote, BackendKind::Scripted, BackendKind::Replay}) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

PolarStep scripted_waypoint(const MetaAction& meta, const DecisionView& view) {
  if (meta.is_arrival()) throw Error(ErrorKind::InvalidArgument, "arrival has no waypoint");
  const double target = view.round == 0 ? view.runway_heading : view.destination.bearing;
  double bearing = geodesy::normalize_bearing(round1(geodesy::normalize_bearing(target)));
  if (octant_of(bearing) != meta.octant()) {
    const double lo = meta.azimuth_lower();
    const double hi = meta.azimuth_upper() - 0.1;
    bearing = geodesy::angular_difference(bearing, lo) <= geodesy::angular_difference(bearing, hi) ? lo : hi;
  }
  double d = std::max(meta.distance_lower() + kBucketMargin, view.destination.distance);
  d = std::min(meta.distance_upper() - kBucketMargin, d);
  return {bearing, round1(d)};
}

PlanDecision scripted_plan_decision(const DecisionView& v) {
  const double remaining = v.destination.distance;
  if (remaining <= v.arrival_radius) return {MetaAction::arrival(), PlanBasis::Arrival, std::nullopt};

  const ExperienceEntry* trace = v.same_runway ? &v.same_runway->entry : nullptr;
  const TraceItem* reuse = nullptr;
  if (trace != nullptr && v.round < static_cast<int>(trace->trace.size()) &&
      !trace->trace[v.round].action.is_arrival()) {
    reuse = &trace->trace[v.round];
  }

  if (v.round == 0) {
    const DistanceBand band = reuse ? reuse->action.band() : DistanceBand::Under10km;
    return {MetaAction::step(octant_of(v.runway_heading), band), PlanBasis::RunwayHeading, std::nullopt};
  }

  const MetaAction greedy = MetaAction::step(
      octant_of(v.destination.bearing), std::min(DistanceBand::From30To50km, band_of(remaining)));
  const PolarStep direct = scripted_waypoint(greedy, v);
  if (miss_distance(remaining, v.destination.bearing, direct.bearing, direct.distance) <= v.arrival_radius) {
    return {greedy, PlanBasis::FinalStep, std::nullopt};
  }

  PlanDecision out{reuse ? reuse->action : greedy, reuse ? PlanBasis::TraceReuse : PlanBasis::Greedy,
                   std::nullopt};

  const double intended = scripted_waypoint(out.action, v).bearing;
  const protection::NotableObstacle* threat = nullptr;
  for (const auto& n : v.notable) {
    if (geodesy::angular_difference(n.relative.bearing, intended) > kOctantHalf) continue;
    if (n.relative.distance >= out.action.distance_upper()) continue;
    if (threat == nullptr || n.relative.distance < threat->relative.distance) threat = &n;
  }
  if (threat != nullptr) {
    const int turn = geodesy::signed_difference(intended, threat->relative.bearing) >= 0.0 ? -1 : 1;
    out.action = MetaAction::step((out.action.octant() + turn + 8) % 8, out.action.band());
    out.avoided = threat->obstacle.name;
  }
  return out;
}

MetaAction scripted_plan(const DecisionView& view) { return scripted_plan_decision(view).action; }

std::string scripted_plan_reply(const DecisionView& v) {
  const PlanDecision d = scripted_plan_decision(v);
  const int index = v.round + 1;
  std::string text = "Thoughts:\n";
  text += " -distance to destination:" + fixed(v.destination.distance, 1) + "m, " +
          (d.action.is_arrival() ? "arrived." : "not arrived yet.") + "\n";
  text += " -goal:plan " + ordinal(index) + " waypoint from RWY" + v.runway + " to " + v.destination_name + ".\n";
  text += " -notable obstacles:" + protection::format_notable_list(v.notable) + "\n";
  text += std::string(" -basis:") + basis_text(d.basis);
  if (d.avoided) text += ", turned one octant away from " + *d.avoided;
  text += "\nMeta Action:" + format_meta_line(index, d.action);
  return text;
}

std::string scripted_waypoint_reply(const DecisionView& v) {
  if (!v.meta) throw Error(ErrorKind::InvalidArgument, "waypoint decision needs a meta action");
  const int index = v.round + 1;
  const PolarStep st = scripted_waypoint(*v.meta, v);
  std::string text = "Thoughts:\n";
  text += " -meta action:" + format_meta_line(index, *v.meta) + "\n";
  text += " -destination:(name:" + v.destination_name + ",relative position:" + fixed(v.destination.bearing, 2) +
          "°,distance:" + fixed(v.destination.distance, 1) + "m)\n";
  text += "Accurate waypoint position:" + format_position_line(index, st);
  return text;
}

ChatReply ScriptedBackend::decide(Role role, const ChatRequest&, const DecisionView& view) {
  ChatReply reply;
  if (role == Role::Plan) {
    reply.text = scripted_plan_reply(view);
  } else if (role == Role::Waypoint) {
    reply.text = scripted_waypoint_reply(view);
  } else {
    throw BackendError(std::string("scripted backend cannot act as ") + to_string(role));
  }
  return reply;
}

ReplayScript script_from_transcript(const std::vector<Message>& transcript) {
  ReplayScript script;
  for (const auto& m : transcript) {
    if (m.role == Role::Plan || m.role == Role::Waypoint) script.push_back({m.role, m.content});
  }
  return script;
}

ChatReply replay_next(const ReplayScript& script, std::size_t& cursor) {
  if (cursor >= script.size()) throw ScriptExhausted();
  ChatReply reply;
  reply.text = script[cursor++].text;
  return reply;
}

ChatReply ReplayBackend::decide(Role role, const ChatRequest&, const DecisionView&) {
  std::lock_guard lock(mu_);
  if (cursor_ < script_.size() && script_[cursor_].role != role) {
    throw MalformedReply(std::string("replay expected ") + to_string(script_[cursor_].role) + " but " +
                         to_string(role) + " asked");
  }
  return replay_next(script_, cursor_);
}

std::size_t ReplayBackend::cursor() const {
  std::lock_guard lock(mu_);
  return cursor_;
}

std::size_t ReplayBackend::remaining() const {
  std::lock_guard lock(mu_);
  return script_.size() - cursor_;
}

}  // namespace fpd
