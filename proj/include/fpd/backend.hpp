#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fpd/agent.hpp"
#include "fpd/experience.hpp"
#include "fpd/geo.hpp"
#include "fpd/protection.hpp"

namespace fpd {

enum class BackendKind { Remote, Scripted, Replay };
const char* to_string(BackendKind kind);
std::optional<BackendKind> backend_kind_from_string(std::string_view name);

struct ChatMessage {
  std::string role;  // "system", "user" or "assistant"
  std::string content;
  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  std::string model;
  double temperature = 0.0;
  std::chrono::milliseconds timeout{60'000};
};

struct TokenUsage {
  int prompt = 0;
  int completion = 0;
  int total = 0;
};

struct ChatReply {
  std::string text;
  TokenUsage usage;
  std::chrono::milliseconds latency{0};
};

// Structured state behind a prompt, for backends that decide without reading text.
struct DecisionView {
  Role role = Role::Plan;
  int round = 0;  // 0-based; the waypoint being decided is round + 1
  std::string procedure;
  std::string runway;
  double runway_heading = 0.0;
  GeoPoint position;  // origin of the next step
  std::string destination_name;
  PolarStep destination;  // from position
  std::vector<protection::NotableObstacle> notable;
  std::optional<Retrieval> same_runway;
  std::optional<Retrieval> same_destination;
  double arrival_radius = 2000.0;
  std::optional<MetaAction> meta;  // set for the Waypoint role
};

// One decision per call for the Plan or Waypoint role. Implementations throw
// BackendError (or a subclass) on transport failure.
class DecisionBackend {
 public:
  virtual ~DecisionBackend() = default;
  virtual BackendKind kind() const noexcept = 0;
  virtual ChatReply decide(Role role, const ChatRequest& request, const DecisionView& view) = 0;
};

}  // namespace fpd
