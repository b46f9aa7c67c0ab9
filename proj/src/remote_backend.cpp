#include "fpd/remote_backend.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "fpd/error.hpp"

namespace fpd {

namespace {

struct Target {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Target split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw BackendError("endpoint URL needs a scheme: " + url);
  const auto path_begin = url.find('/', scheme_end + 3);
  Target t;
  t.origin = url.substr(0, path_begin);
  std::string path = path_begin == std::string::npos ? std::string() : url.substr(path_begin);
  while (!path.empty() && path.back() == '/') path.pop_back();
  if (path.empty()) path = "/v1";
  const std::string suffix = "/chat/completions";
  if (path.size() < suffix.size() || path.compare(path.size() - suffix.size(), suffix.size(), suffix) != 0) {
    path += suffix;
  }
  t.path = path;
  return t;
}

std::string env_or(const char* name, const char* fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? v : fallback;
}

ChatReply parse_reply(const std::string& body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw MalformedReply(std::string("reply is not JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
    throw MalformedReply("reply has no choices");
  }
  const auto& first = j["choices"][0];
  if (!first.contains("message") || !first["message"].contains("content") ||
      !first["message"]["content"].is_string()) {
    throw MalformedReply("first choice has no message content");
  }
  ChatReply reply;
  reply.text = first["message"]["content"].get<std::string>();
  if (j.contains("usage") && j["usage"].is_object()) {
    reply.usage.prompt = j["usage"].value("prompt_tokens", 0);
    reply.usage.completion = j["usage"].value("completion_tokens", 0);
    reply.usage.total = j["usage"].value("total_tokens", 0);
  }
  return reply;
}

}  // namespace

EndpointConfig EndpointConfig::from_environment() {
  EndpointConfig cfg;
  cfg.url = env_or("FPD_LLM_ENDPOINT", "https://api.openai.com/v1");
  cfg.model = env_or("FPD_LLM_MODEL", "gpt-4o-mini");
  cfg.api_key = env_or("FPD_LLM_API_KEY", "");
  return cfg;
}

ChatReply chat_complete(const ChatRequest& request, const EndpointConfig& endpoint) {
  if (request.messages.empty() || request.messages.front().role != "system") {
    throw Error(ErrorKind::InvalidArgument, "chat request must start with a system message");
  }
  const Target target = split_url(endpoint.url);

  nlohmann::json body;
  body["model"] = request.model.empty() ? endpoint.model : request.model;
  body["temperature"] = request.temperature;
  body["messages"] = nlohmann::json::array();
  for (const auto& m : request.messages) body["messages"].push_back({{"role", m.role}, {"content", m.content}});
  const std::string payload = body.dump();

  const auto timeout = std::min(request.timeout, endpoint.timeout);
  httplib::Client client(target.origin);
  client.set_connection_timeout(timeout);
  client.set_read_timeout(timeout);
  client.set_write_timeout(timeout);
  httplib::Headers headers;
  if (!endpoint.api_key.empty()) headers.emplace("Authorization", "Bearer " + endpoint.api_key);

  for (int attempt = 0;; ++attempt) {
    const auto started = std::chrono::steady_clock::now();
    auto res = client.Post(target.path, headers, payload, "application/json");
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    if (!res) {
      const auto err = res.error();
      const bool timed_out = err == httplib::Error::ConnectionTimeout ||
                             ((err == httplib::Error::Read || err == httplib::Error::Write) &&
                              elapsed >= timeout * 9 / 10);
      if (timed_out) throw TimeoutError("no reply from " + endpoint.url + " within " + std::to_string(timeout.count()) + " ms");
      throw BackendError("transport failure talking to " + endpoint.url + ": " + httplib::to_string(err));
    }
    const int status = res->status;
    if (status == 429 || status >= 500) {
      if (attempt < endpoint.retries) {
        std::this_thread::sleep_for(endpoint.backoff * (attempt + 1));
        continue;
      }
      throw HttpStatusError(status, res->body);
    }
    if (status < 200 || status >= 300) throw HttpStatusError(status, res->body);
    ChatReply reply = parse_reply(res->body);
    reply.latency = elapsed;
    return reply;
  }
}

ChatReply RemoteBackend::decide(Role, const ChatRequest& request, const DecisionView&) {
  return chat_complete(request, endpoint_);
}

}  // namespace fpd
