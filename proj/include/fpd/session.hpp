#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stop_token>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "fpd/action_parser.hpp"
#include "fpd/agent.hpp"
#include "fpd/backend.hpp"
#include "fpd/experience.hpp"
#include "fpd/fix_command.hpp"
#include "fpd/navdata.hpp"
#include "fpd/prompts.hpp"
#include "fpd/protection.hpp"

namespace fpd {

enum class SessionStatus { Planning, AwaitingFeedback, Completed, Exhausted, Failed };
const char* to_string(SessionStatus status);
std::optional<SessionStatus> status_from_string(std::string_view name);

struct SessionConfig {
  int max_rounds = 8;
  double first_leg_max_offset = 15.0;  // degrees
  double arrival_radius = 2000.0;      // meters
  bool interactive = false;
  protection::ZoneConfig zone;
  bool operator==(const SessionConfig&) const = default;
};

// Throws InvalidArgument.
void validate(const SessionConfig& cfg);

// What the Task agent extracts; recorded as the first transcript message.
struct TaskSpec {
  std::string icao;
  std::string runway;
  std::string destination;
  std::string procedure;
  SessionConfig config;
  bool operator==(const TaskSpec&) const = default;
};

using Payload = std::variant<std::monostate, ParsedMetaAction, PolarStep, GeoPoint, FixCommand, TaskSpec,
                             std::vector<GeoPoint>>;

struct Message {
  Role role = Role::Task;
  std::string content;
  int round = 0;
  Payload parsed;  // monostate when the content did not parse or carries nothing
  bool operator==(const Message&) const = default;
};

// Resolved, immutable inputs shared by every copy of a session.
struct DesignContext {
  Airport airport;
  Runway runway;
  Fix destination;
  std::vector<ExperienceEntry> memory;  // airport memory minus the procedure being designed
  std::shared_ptr<const PromptSet> prompts;
};

struct DesignSession {
  std::shared_ptr<const DesignContext> context;
  TaskSpec task;
  std::vector<GeoPoint> waypoints;
  std::vector<Message> transcript;
  int round = 0;
  SessionStatus status = SessionStatus::Planning;
  std::optional<SessionStatus> resume_status;  // status to restore after a no_fix
  std::map<Role, int> hallucinations;          // parse failures per role
  int clamp_events = 0;                        // waypoint replies pulled back into the plan bucket

  const SessionConfig& config() const noexcept { return task.config; }
  const Runway& runway() const noexcept { return context->runway; }
  const Fix& destination() const noexcept { return context->destination; }
  GeoPoint position() const;                   // threshold or last waypoint
  bool terminal() const noexcept;              // Completed, Exhausted or Failed
};

// Throws NotFound for unresolvable identifiers, InvalidArgument for a bad config.
DesignSession create_session(const NavDatabase& db, std::string_view icao, std::string_view runway,
                             std::string_view destination, const SessionConfig& cfg = {},
                             std::shared_ptr<const PromptSet> prompts = nullptr);
DesignSession create_session(const NavDatabase& db, const TaskSpec& task,
                             std::shared_ptr<const PromptSet> prompts = nullptr);

// Starts a fresh session from already finished waypoints (recorded as a Tool
// message). Throws InvalidState unless the session is untouched.
void seed_waypoints(DesignSession& session, const std::vector<GeoPoint>& waypoints);

struct StepOutcome {
  std::optional<GeoPoint> new_waypoint;
  std::size_t transcript_begin = 0;  // first message this round added
};

// One round: GroupManager, Plan, Waypoint, Calculate, Render (Arrival skips
// Waypoint and Calculate). Transactional: on BackendError or cancellation the
// session is left as it was. A reply that fails to parse is retried once;
// a second failure commits status Failed and rethrows the ParseError.
StepOutcome step(DesignSession& session, DecisionBackend& backend, std::stop_token stop = {});

// Only while AwaitingFeedback. Throws InvalidState, IndexOutOfRange, InvalidStep.
void apply_fix(DesignSession& session, const FixCommand& cmd);

double first_leg_offset(const Runway& runway, const GeoPoint& first_waypoint);
bool first_leg_compliant(const Runway& runway, const GeoPoint& first_waypoint, double max_offset);
// Requires at least one waypoint (InvalidState otherwise).
bool first_leg_compliant(const DesignSession& session);

// Inputs for the next decision of role (Plan or Waypoint).
DecisionView decision_view(const DesignSession& session, Role role,
                           std::optional<MetaAction> meta = std::nullopt);
ChatRequest plan_request(const DesignSession& session, const DecisionView& view);
ChatRequest waypoint_request(const DesignSession& session, const DecisionView& view);

nlohmann::json message_to_json(const Message& m);
Message message_from_json(const nlohmann::json& j);
std::string transcript_to_jsonl(const std::vector<Message>& transcript);
// Throws ParseError(line) on a malformed line.
std::vector<Message> transcript_from_jsonl(std::string_view text);

// Rebuilds a session from its transcript: the Task message gives the inputs,
// recorded replies drive the rounds and recorded User messages the fixes.
DesignSession replay_session(const NavDatabase& db, const std::vector<Message>& transcript,
                             std::shared_ptr<const PromptSet> prompts = nullptr);

nlohmann::json session_to_json(const DesignSession& session);
nlohmann::json task_to_json(const TaskSpec& task);
TaskSpec task_from_json(const nlohmann::json& j);

}  // namespace fpd
