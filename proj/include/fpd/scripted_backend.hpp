#pragma once

#include "fpd/backend.hpp"

namespace fpd {

// Why the heuristic picked its plan; surfaced in the reply's Thoughts block.
enum class PlanBasis { Arrival, FinalStep, RunwayHeading, TraceReuse, Greedy };

struct PlanDecision {
  MetaAction action = MetaAction::arrival();
  PlanBasis basis = PlanBasis::Arrival;
  std::optional<std::string> avoided;  // obstacle that rotated the octant
};

// Deterministic stand-in for the Plan model. Rules, first match wins:
//  arrival when the destination is inside arrival_radius; a direct final step
//  when a greedy step lands inside it; round 0 uses the runway-heading octant;
//  otherwise reuse the same-runway trace entry for this round, else greedy
//  toward the destination capped at the 30-50 km band. After round 0 the
//  octant rotates once away from a notable obstacle that sits within 22.5°
//  of the intended bearing and nearer than the band's far edge.
PlanDecision scripted_plan_decision(const DecisionView& view);
MetaAction scripted_plan(const DecisionView& view);

// Bearing toward the destination (runway heading on round 0) clamped into the
// octant, distance = remaining clamped to [lower + 100 m, upper - 100 m].
// Values are rounded to 0.1 so the printed reply parses back to the same step.
PolarStep scripted_waypoint(const MetaAction& meta, const DecisionView& view);

std::string scripted_plan_reply(const DecisionView& view);
std::string scripted_waypoint_reply(const DecisionView& view);

class ScriptedBackend final : public DecisionBackend {
 public:
  BackendKind kind() const noexcept override { return BackendKind::Scripted; }
  ChatReply decide(Role role, const ChatRequest& request, const DecisionView& view) override;
};

}  // namespace fpd
