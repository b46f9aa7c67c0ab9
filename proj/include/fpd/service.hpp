#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "fpd/backend.hpp"
#include "fpd/navdata.hpp"

namespace fpd {

// Builds the backend for a new session from the create request's "backend"
// name and body. Throws InvalidArgument for an unknown name.
using BackendFactory =
    std::function<std::shared_ptr<DecisionBackend>(const std::string& kind, const nlohmann::json& request)>;

// scripted; remote (endpoint from the environment); replay (body "script" holds
// transcript JSON Lines).
BackendFactory default_backend_factory();

struct ServiceOptions {
  std::filesystem::path sessions_dir;  // empty: memory only
};

// HTTP+JSON session API. Each session is mutated by one request at a time;
// a step or feedback arriving while another is running gets 409.
class SessionService {
 public:
  SessionService(std::shared_ptr<const NavDatabase> db, BackendFactory factory = default_backend_factory(),
                 ServiceOptions options = {});
  ~SessionService();
  SessionService(const SessionService&) = delete;
  SessionService& operator=(const SessionService&) = delete;

  // Returns the bound port; port 0 picks a free one. Throws InvalidArgument.
  int bind(const std::string& host, int port);
  void run();    // blocks until stop()
  void start();  // run() on a background thread
  void stop();

  // Sessions rebuilt from the sessions directory at construction.
  std::size_t restored() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fpd
