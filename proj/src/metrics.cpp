#include "fpd/metrics.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

#include "fpd/error.hpp"
#include "fpd/session.hpp"
#include "fpd/text_format.hpp"

namespace fpd {

using nlohmann::json;

ProcedureDesign design_of(const DesignSession& s) {
  const SessionStatus effective = s.status == SessionStatus::AwaitingFeedback && s.resume_status
                                      ? *s.resume_status
                                      : s.status;
  return {s.task.icao, s.task.procedure, s.task.runway, s.task.destination, s.waypoints,
          effective == SessionStatus::Completed};
}

int ProcedureResult::safe_legs() const noexcept {
  int n = 0;
  for (const auto& v : violations) n += v.empty() ? 1 : 0;
  return n;
}

double compute_fps(std::span<const ProcedureResult> results) {
  int legs = 0, safe = 0;
  for (const auto& r : results) {
    legs += static_cast<int>(r.legs.size());
    safe += r.safe_legs();
  }
  if (legs == 0) throw Error(ErrorKind::Undefined, "FPS is undefined without legs");
  return static_cast<double>(safe) / legs;
}

double compute_scc(std::span<const ProcedureResult> results) {
  if (results.empty()) throw Error(ErrorKind::Undefined, "SCC is undefined without procedures");
  int ok = 0;
  for (const auto& r : results) ok += r.first_leg_ok ? 1 : 0;
  return static_cast<double>(ok) / static_cast<double>(results.size());
}

double compute_mcr(std::span<const ProcedureResult> results) {
  if (results.empty()) throw Error(ErrorKind::Undefined, "MCR is undefined without procedures");
  int done = 0;
  for (const auto& r : results) done += r.completed ? 1 : 0;
  return static_cast<double>(done) / static_cast<double>(results.size());
}

ProcedureResult assess(const NavDatabase& db, const ProcedureDesign& design, const protection::ZoneConfig& zone,
                       double first_leg_max_offset) {
  const Airport& airport = lookup_airport(db, design.icao);
  const Runway& runway = lookup_runway(db, design.icao, design.runway);
  ProcedureResult r;
  r.design = design;
  r.completed = design.completed;
  r.legs = protection::build_legs(runway.threshold, design.waypoints);
  for (std::size_t i = 0; i < r.legs.size(); ++i) {
    r.violations.push_back(protection::leg_violations(r.legs[i], runway.der_elevation, airport.obstacles, zone,
                                                      static_cast<int>(i)));
  }
  if (!design.waypoints.empty()) {
    r.first_leg_offset = first_leg_offset(runway, design.waypoints.front());
    r.first_leg_ok = *r.first_leg_offset <= first_leg_max_offset;
  }
  return r;
}

MetricsReport evaluate_designs(const NavDatabase& db, std::span<const ProcedureDesign> designs,
                               const protection::ZoneConfig& zone, double first_leg_max_offset) {
  MetricsReport rep;
  for (const auto& d : designs) rep.details.push_back(assess(db, d, zone, first_leg_max_offset));
  for (const auto& r : rep.details) {
    rep.n_legs += static_cast<int>(r.legs.size());
    rep.n_safe_legs += r.safe_legs();
    rep.n_compliant += r.first_leg_ok ? 1 : 0;
    rep.n_completed += r.completed ? 1 : 0;
    ++rep.waypoint_histogram[static_cast<int>(r.design.waypoints.size())];
  }
  rep.n_procedures = static_cast<int>(rep.details.size());
  if (rep.n_legs > 0) rep.fps = compute_fps(rep.details);
  if (rep.n_procedures > 0) {
    rep.scc = compute_scc(rep.details);
    rep.mcr = compute_mcr(rep.details);
  }
  return rep;
}

MetricsReport evaluate_run(const NavDatabase& db, std::span<const DesignSession> sessions,
                           const protection::ZoneConfig& zone, double first_leg_max_offset) {
  std::vector<ProcedureDesign> designs;
  designs.reserve(sessions.size());
  for (const auto& s : sessions) designs.push_back(design_of(s));
  return evaluate_designs(db, designs, zone, first_leg_max_offset);
}

std::string format_percent(double fraction) { return compact(fraction * 100.0, 2); }

std::string format_percent(const std::optional<double>& fraction) {
  return fraction ? format_percent(*fraction) : std::string("n/a");
}

json report_to_json(const MetricsReport& rep) {
  auto metric = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json hist = json::object();
  for (const auto& [n, count] : rep.waypoint_histogram) hist[std::to_string(n)] = count;
  json details = json::array();
  for (const auto& r : rep.details) {
    json legs = json::array();
    for (std::size_t i = 0; i < r.legs.size(); ++i) {
      json viol = json::array();
      for (const auto& v : r.violations[i]) viol.push_back({{"obstacle", v.obstacle}, {"deficit_m", v.deficit}});
      legs.push_back({{"index", i + 1}, {"safe", r.violations[i].empty()}, {"violations", std::move(viol)}});
    }
    details.push_back({{"procedure", r.design.procedure},
                       {"runway", r.design.runway},
                       {"destination", r.design.destination},
                       {"waypoints", r.design.waypoints.size()},
                       {"completed", r.completed},
                       {"first_leg_ok", r.first_leg_ok},
                       {"first_leg_offset_deg", r.first_leg_offset ? json(*r.first_leg_offset) : json(nullptr)},
                       {"legs", std::move(legs)}});
  }
  return {{"fps", metric(rep.fps)},
          {"scc", metric(rep.scc)},
          {"mcr", metric(rep.mcr)},
          {"fps_percent", format_percent(rep.fps)},
          {"scc_percent", format_percent(rep.scc)},
          {"mcr_percent", format_percent(rep.mcr)},
          {"n_legs", rep.n_legs},
          {"n_safe_legs", rep.n_safe_legs},
          {"n_procedures", rep.n_procedures},
          {"n_compliant", rep.n_compliant},
          {"n_completed", rep.n_completed},
          {"waypoint_histogram", std::move(hist)},
          {"procedures", std::move(details)}};
}

std::string report_table(const std::vector<std::pair<std::string, MetricsReport>>& rows) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-16s %6s %6s %9s %9s %9s\n", "Run", "Procs", "Legs", "FPS(%)", "SCC(%)",
                "MCR(%)");
  out += line;
  for (const auto& [label, r] : rows) {
    std::snprintf(line, sizeof line, "%-16s %6d %6d %9s %9s %9s\n", label.c_str(), r.n_procedures, r.n_legs,
                  format_percent(r.fps).c_str(), format_percent(r.scc).c_str(), format_percent(r.mcr).c_str());
    out += line;
  }
  return out;
}

std::string report_table(const std::string& label, const MetricsReport& report) {
  return report_table(std::vector<std::pair<std::string, MetricsReport>>{{label, report}});
}

}  // namespace fpd
