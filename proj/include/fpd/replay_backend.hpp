#pragma once

#include <cstddef>
#include <mutex>
#include <vector>

#include "fpd/backend.hpp"

namespace fpd {

struct Message;

struct RecordedReply {
  Role role = Role::Plan;
  std::string text;
  bool operator==(const RecordedReply&) const = default;
};

using ReplayScript = std::vector<RecordedReply>;

// Plan and Waypoint replies of a transcript, in order, including ones that
// failed to parse (so hallucination retries replay too).
ReplayScript script_from_transcript(const std::vector<Message>& transcript);

// Next recorded reply; advances cursor. Throws ScriptExhausted at the end.
ChatReply replay_next(const ReplayScript& script, std::size_t& cursor);

class ReplayBackend final : public DecisionBackend {
 public:
  explicit ReplayBackend(ReplayScript script) : script_(std::move(script)) {}

  BackendKind kind() const noexcept override { return BackendKind::Replay; }
  // Throws ScriptExhausted, or MalformedReply when the recorded role differs.
  ChatReply decide(Role role, const ChatRequest& request, const DecisionView& view) override;

  std::size_t cursor() const;
  std::size_t remaining() const;

 private:
  ReplayScript script_;
  mutable std::mutex mu_;
  std::size_t cursor_ = 0;
};

}  // namespace fpd
