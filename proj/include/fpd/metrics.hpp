#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fpd/navdata.hpp"
#include "fpd/protection.hpp"

namespace fpd {

struct DesignSession;

// A finished (or abandoned) design, independent of how it was produced.
struct ProcedureDesign {
  std::string icao;
  std::string procedure;
  std::string runway;
  std::string destination;
  std::vector<GeoPoint> waypoints;
  bool completed = false;
  bool operator==(const ProcedureDesign&) const = default;
};

ProcedureDesign design_of(const DesignSession& session);

struct ProcedureResult {
  ProcedureDesign design;
  std::vector<protection::Leg> legs;                       // threshold -> w1 -> ... -> wn
  std::vector<std::vector<protection::Violation>> violations;  // one list per leg
  bool first_leg_ok = false;
  std::optional<double> first_leg_offset;  // degrees, absent without waypoints
  bool completed = false;

  int safe_legs() const noexcept;
};

struct MetricsReport {
  std::optional<double> fps;  // absent when undefined (no legs / no procedures)
  std::optional<double> scc;
  std::optional<double> mcr;
  int n_legs = 0;
  int n_safe_legs = 0;
  int n_procedures = 0;
  int n_compliant = 0;
  int n_completed = 0;
  std::map<int, int> waypoint_histogram;  // waypoint count -> procedures
  std::vector<ProcedureResult> details;
};

// Each throws Error(Undefined) when its denominator is zero.
double compute_fps(std::span<const ProcedureResult> results);
double compute_scc(std::span<const ProcedureResult> results);
double compute_mcr(std::span<const ProcedureResult> results);

ProcedureResult assess(const NavDatabase& db, const ProcedureDesign& design, const protection::ZoneConfig& zone,
                       double first_leg_max_offset = 15.0);

MetricsReport evaluate_designs(const NavDatabase& db, std::span<const ProcedureDesign> designs,
                               const protection::ZoneConfig& zone = {}, double first_leg_max_offset = 15.0);
MetricsReport evaluate_run(const NavDatabase& db, std::span<const DesignSession> sessions,
                           const protection::ZoneConfig& zone = {}, double first_leg_max_offset = 15.0);

// Fraction as a percentage with at most two decimals: 0.981818 -> "98.18", 0.75 -> "75".
std::string format_percent(double fraction);
std::string format_percent(const std::optional<double>& fraction);  // "n/a" when undefined

nlohmann::json report_to_json(const MetricsReport& report);
// Fixed-width table: one row per label, FPS(%) SCC(%) MCR(%) columns.
std::string report_table(const std::vector<std::pair<std::string, MetricsReport>>& rows);
std::string report_table(const std::string& label, const MetricsReport& report);

}  // namespace fpd
