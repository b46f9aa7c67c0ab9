#pragma once

#include <chrono>
#include <string>

#include "fpd/backend.hpp"

namespace fpd {

struct EndpointConfig {
  std::string url;  // base ("https://host/v1") or full ".../chat/completions"
  std::string model;
  std::string api_key;
  std::chrono::milliseconds timeout{60'000};
  int retries = 1;  // extra attempts after a 429 or 5xx
  std::chrono::milliseconds backoff{500};

  // FPD_LLM_ENDPOINT, FPD_LLM_MODEL, FPD_LLM_API_KEY
  static EndpointConfig from_environment();
};

// One OpenAI-compatible chat-completions exchange. The request messages are
// sent unchanged. Throws TimeoutError, HttpStatusError, MalformedReply or
// BackendError for other transport failures.
ChatReply chat_complete(const ChatRequest& request, const EndpointConfig& endpoint);

class RemoteBackend final : public DecisionBackend {
 public:
  explicit RemoteBackend(EndpointConfig endpoint) : endpoint_(std::move(endpoint)) {}

  BackendKind kind() const noexcept override { return BackendKind::Remote; }
  ChatReply decide(Role role, const ChatRequest& request, const DecisionView& view) override;

  const EndpointConfig& endpoint() const noexcept { return endpoint_; }

 private:
  EndpointConfig endpoint_;
};

}  // namespace fpd
