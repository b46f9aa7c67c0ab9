#include "fpd/service.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "fpd/error.hpp"
#include "fpd/export_render.hpp"
#include "fpd/metrics.hpp"
#include "fpd/remote_backend.hpp"
#include "fpd/replay_backend.hpp"
#include "fpd/scripted_backend.hpp"
#include "fpd/session.hpp"

namespace fpd {

using nlohmann::json;

namespace {

struct Entry {
  std::string id;
  std::string backend_kind;
  std::int64_t created_ms = 0;
  std::shared_ptr<DecisionBackend> backend;

  std::mutex work;  // held for the whole of a step or feedback
  mutable std::mutex state_mu;
  DesignSession session;  // last consistent state, guarded by state_mu

  DesignSession read() const {
    std::lock_guard lock(state_mu);
    return session;
  }
  void publish(DesignSession s) {
    std::lock_guard lock(state_mu);
    session = std::move(s);
  }
};

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& kind, const std::string& message,
                const json* state = nullptr) {
  json body = {{"error", kind}, {"message", message}};
  if (state != nullptr) body["session"] = *state;
  send(res, status, body);
}

json point_or_null(const std::optional<GeoPoint>& p) {
  return p ? json::array({p->lat, p->lon}) : json(nullptr);
}

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

int status_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::NotFound:
    case ErrorKind::Reference: return 404;
    case ErrorKind::InvalidState:
    case ErrorKind::EmptyProcedure: return 409;
    case ErrorKind::Backend:
    case ErrorKind::Timeout:
    case ErrorKind::HttpStatus:
    case ErrorKind::MalformedReply:
    case ErrorKind::ScriptExhausted: return 502;
    default: return 422;
  }
}

}  // namespace

BackendFactory default_backend_factory() {
  return [](const std::string& kind, const json& request) -> std::shared_ptr<DecisionBackend> {
    if (kind == "scripted") return std::make_shared<ScriptedBackend>();
    if (kind == "remote") return std::make_shared<RemoteBackend>(EndpointConfig::from_environment());
    if (kind == "replay") {
      if (!request.contains("script") || !request["script"].is_string()) {
        throw Error(ErrorKind::InvalidArgument, "replay backend needs a 'script' transcript");
      }
      return std::make_shared<ReplayBackend>(
          script_from_transcript(transcript_from_jsonl(request["script"].get<std::string>())));
    }
    throw Error(ErrorKind::InvalidArgument, "unknown backend '" + kind + "'");
  };
}

struct SessionService::Impl {
  std::shared_ptr<const NavDatabase> db;
  BackendFactory factory;
  ServiceOptions options;
  httplib::Server server;
  std::thread worker;

  std::shared_mutex table_mu;
  std::map<std::string, std::shared_ptr<Entry>> sessions;
  std::atomic<std::uint64_t> counter{0};
  std::mt19937_64 rng{std::random_device{}()};
  std::mutex rng_mu;
  std::size_t restored = 0;

  std::string new_id() {
    std::uint64_t r;
    {
      std::lock_guard lock(rng_mu);
      r = rng();
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "s%llu-%08llx", static_cast<unsigned long long>(++counter),
                  static_cast<unsigned long long>(r & 0xffffffffULL));
    return buf;
  }

  std::shared_ptr<Entry> find(const std::string& id) {
    std::shared_lock lock(table_mu);
    const auto it = sessions.find(id);
    return it == sessions.end() ? nullptr : it->second;
  }

  json state_json(const Entry& e, const DesignSession& s) const {
    json j = session_to_json(s);
    j["id"] = e.id;
    j["backend"] = e.backend_kind;
    j["created_ms"] = e.created_ms;
    j["snapshot"] = render_snapshot(s);
    return j;
  }

  void persist(const Entry& e, const DesignSession& s) const {
    if (options.sessions_dir.empty()) return;
    std::error_code ec;
    std::filesystem::create_directories(options.sessions_dir, ec);
    const auto base = options.sessions_dir / e.id;
    {
      std::ofstream out(base.string() + ".jsonl", std::ios::binary | std::ios::trunc);
      out << transcript_to_jsonl(s.transcript);
    }
    std::ofstream meta(base.string() + ".meta.json", std::ios::binary | std::ios::trunc);
    meta << json{{"id", e.id}, {"backend", e.backend_kind}, {"created_ms", e.created_ms}}.dump() << '\n';
  }

  void restore() {
    if (options.sessions_dir.empty() || !std::filesystem::is_directory(options.sessions_dir)) return;
    for (const auto& f : std::filesystem::directory_iterator(options.sessions_dir)) {
      const auto name = f.path().filename().string();
      if (f.path().extension() != ".jsonl") continue;
      std::ifstream in(f.path(), std::ios::binary);
      std::stringstream buf;
      buf << in.rdbuf();
      auto e = std::make_shared<Entry>();
      e->id = f.path().stem().string();
      e->backend_kind = "scripted";
      std::ifstream meta(options.sessions_dir / (e->id + ".meta.json"));
      if (meta) {
        try {
          const json m = json::parse(meta);
          e->backend_kind = m.value("backend", e->backend_kind);
          e->created_ms = m.value("created_ms", std::int64_t{0});
        } catch (const json::exception&) {
        }
      }
      try {
        e->session = replay_session(*db, transcript_from_jsonl(buf.str()));
        json req = json::object();
        if (e->backend_kind == "replay") req["script"] = "";  // recorded replies are already spent
        e->backend = factory(e->backend_kind, req);
      } catch (const std::exception& ex) {
        std::fprintf(stderr, "skipping stored session %s: %s\n", name.c_str(), ex.what());
        continue;
      }
      std::unique_lock lock(table_mu);
      sessions[e->id] = e;
      ++restored;
    }
  }

  bool require_json(const httplib::Request& req, httplib::Response& res, bool body_required) {
    if (req.body.empty() && !body_required) return true;
    const auto ct = req.get_header_value("Content-Type");
    if (ct.rfind("application/json", 0) != 0) {
      send_error(res, 415, "UnsupportedMediaType", "expected Content-Type: application/json");
      return false;
    }
    return true;
  }

  bool parse_body(const httplib::Request& req, httplib::Response& res, json& out) {
    if (req.body.empty()) {
      out = json::object();
      return true;
    }
    try {
      out = json::parse(req.body);
    } catch (const json::parse_error& e) {
      send_error(res, 400, "Parse", e.what());
      return false;
    }
    if (!out.is_object()) {
      send_error(res, 400, "Parse", "request body must be a JSON object");
      return false;
    }
    return true;
  }

  void create(const httplib::Request& req, httplib::Response& res) {
    if (!require_json(req, res, true)) return;
    json body;
    if (!parse_body(req, res, body)) return;
    for (const char* key : {"icao", "runway", "destination"}) {
      if (!body.contains(key) || !body[key].is_string()) {
        send_error(res, 422, "InvalidArgument", std::string("missing string field '") + key + "'");
        return;
      }
    }
    try {
      SessionConfig cfg;
      if (body.contains("config")) cfg = task_from_json({{"icao", ""}, {"runway", ""}, {"destination", ""},
                                                         {"config", body["config"]}}).config;
      cfg.interactive = body.value("interactive", false);
      const std::string kind = body.value("backend", std::string("scripted"));

      auto e = std::make_shared<Entry>();
      e->id = new_id();
      e->created_ms = now_ms();
      e->backend_kind = kind;
      e->backend = factory(kind, body);
      DesignSession s = create_session(*db, body["icao"].get<std::string>(), body["runway"].get<std::string>(),
                                       body["destination"].get<std::string>(), cfg);
      if (body.contains("seed_waypoints")) {
        std::vector<GeoPoint> seed;
        for (const auto& p : body["seed_waypoints"]) seed.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        seed_waypoints(s, seed);
      }
      e->session = s;
      persist(*e, s);
      {
        std::unique_lock lock(table_mu);
        sessions[e->id] = e;
      }
      send(res, 201, {{"id", e->id}, {"status", to_string(s.status)}});
    } catch (const Error& ex) {
      send_error(res, status_for(ex), to_string(ex.kind()), ex.what());
    } catch (const json::exception& ex) {
      send_error(res, 422, "InvalidArgument", ex.what());
    }
  }

  void do_step(const httplib::Request& req, httplib::Response& res) {
    if (!require_json(req, res, false)) return;
    const auto e = find(req.matches[1]);
    if (!e) return send_error(res, 404, "NotFound", "unknown session");
    std::unique_lock work(e->work, std::try_to_lock);
    if (!work.owns_lock()) return send_error(res, 409, "Conflict", "a round is already in progress");

    DesignSession s = e->read();
    if (s.status != SessionStatus::Planning) {
      return send_error(res, 409, "InvalidState", std::string("session is ") + to_string(s.status));
    }
    try {
      const StepOutcome out = step(s, *e->backend);
      e->publish(s);
      persist(*e, s);
      json delta = json::array();
      for (std::size_t i = out.transcript_begin; i < s.transcript.size(); ++i) {
        delta.push_back(message_to_json(s.transcript[i]));
      }
      send(res, 200,
           {{"new_waypoint", point_or_null(out.new_waypoint)},
            {"transcript_delta", std::move(delta)},
            {"status", to_string(s.status)},
            {"round", s.round},
            {"snapshot", render_snapshot(s)}});
    } catch (const ParseError& ex) {
      // step committed the failed state before rethrowing
      e->publish(s);
      persist(*e, s);
      const json state = state_json(*e, s);
      send_error(res, 502, "Parse", ex.what(), &state);
    } catch (const BackendError& ex) {
      const json state = state_json(*e, s);
      send_error(res, 502, to_string(ex.kind()), ex.what(), &state);
    } catch (const Error& ex) {
      send_error(res, status_for(ex), to_string(ex.kind()), ex.what());
    }
  }

  void feedback(const httplib::Request& req, httplib::Response& res) {
    if (!require_json(req, res, true)) return;
    json body;
    if (!parse_body(req, res, body)) return;
    const auto e = find(req.matches[1]);
    if (!e) return send_error(res, 404, "NotFound", "unknown session");
    std::unique_lock work(e->work, std::try_to_lock);
    if (!work.owns_lock()) return send_error(res, 409, "Conflict", "a round is in progress");

    DesignSession s = e->read();
    if (s.status != SessionStatus::AwaitingFeedback) {
      return send_error(res, 409, "InvalidState", std::string("session is ") + to_string(s.status));
    }
    FixCommand cmd;
    try {
      cmd = body.contains("text") && body["text"].is_string() ? parse_fix_command(body["text"].get<std::string>())
                                                              : fix_command_from_json(body);
      apply_fix(s, cmd);
    } catch (const Error& ex) {
      return send_error(res, ex.kind() == ErrorKind::InvalidState ? 409 : 422, to_string(ex.kind()), ex.what());
    }
    e->publish(s);
    persist(*e, s);
    send(res, 200, state_json(*e, s));
  }

  void get(const httplib::Request& req, httplib::Response& res) {
    const auto e = find(req.matches[1]);
    if (!e) return send_error(res, 404, "NotFound", "unknown session");
    send(res, 200, state_json(*e, e->read()));
  }

  void finalize(const httplib::Request& req, httplib::Response& res) {
    if (!require_json(req, res, false)) return;
    const auto e = find(req.matches[1]);
    if (!e) return send_error(res, 404, "NotFound", "unknown session");
    const DesignSession s = e->read();
    try {
      const ProcedureDesign d = design_of(s);
      const MetricsReport rep = evaluate_designs(*db, std::vector<ProcedureDesign>{d}, s.config().zone,
                                                 s.config().first_leg_max_offset);
      send(res, 200,
           {{"id", e->id},
            {"status", to_string(s.status)},
            {"metrics", report_to_json(rep)},
            {"txt", export_txt(d)},
            {"snapshot", render_snapshot(s)}});
    } catch (const Error& ex) {
      send_error(res, status_for(ex), to_string(ex.kind()), ex.what());
    }
  }

  void list(const httplib::Request&, httplib::Response& res) {
    json ids = json::array();
    std::shared_lock lock(table_mu);
    for (const auto& [id, e] : sessions) {
      const DesignSession s = e->read();
      ids.push_back({{"id", id}, {"status", to_string(s.status)}, {"procedure", s.task.procedure}});
    }
    send(res, 200, {{"sessions", std::move(ids)}});
  }

  void navdata(const httplib::Request& req, httplib::Response& res) {
    try {
      const Airport& a = lookup_airport(*db, std::string(req.matches[1]));
      json runways = json::array(), fixes = json::array(), procedures = json::array();
      for (const auto& r : a.runways) {
        runways.push_back({{"name", r.name},
                           {"lat", r.threshold.lat},
                           {"lon", r.threshold.lon},
                           {"heading_deg", r.heading},
                           {"der_elev_m", r.der_elevation}});
      }
      for (const auto& f : a.fixes) fixes.push_back({{"name", f.name}, {"lat", f.position.lat}, {"lon", f.position.lon}});
      for (const auto& p : a.procedures) {
        procedures.push_back({{"name", p.name}, {"runway", p.runway}, {"destination", p.destination}});
      }
      send(res, 200,
           {{"icao", a.icao},
            {"runways", std::move(runways)},
            {"fixes", std::move(fixes)},
            {"obstacles", a.obstacles.size()},
            {"procedures", std::move(procedures)}});
    } catch (const Error& ex) {
      send_error(res, status_for(ex), to_string(ex.kind()), ex.what());
    }
  }

  void routes() {
    server.Post("/sessions", [this](const auto& q, auto& r) { create(q, r); });
    server.Get("/sessions", [this](const auto& q, auto& r) { list(q, r); });
    server.Post(R"(/sessions/([^/]+)/step)", [this](const auto& q, auto& r) { do_step(q, r); });
    server.Post(R"(/sessions/([^/]+)/feedback)", [this](const auto& q, auto& r) { feedback(q, r); });
    server.Post(R"(/sessions/([^/]+)/finalize)", [this](const auto& q, auto& r) { finalize(q, r); });
    server.Get(R"(/sessions/([^/]+))", [this](const auto& q, auto& r) { get(q, r); });
    server.Get(R"(/navdata/([^/]+))", [this](const auto& q, auto& r) { navdata(q, r); });
    server.set_exception_handler([](const auto&, auto& res, std::exception_ptr ep) {
      std::string what = "internal error";
      try {
        std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        what = e.what();
      } catch (...) {
      }
      send_error(res, 500, "Internal", what);
    });
  }
};

SessionService::SessionService(std::shared_ptr<const NavDatabase> db, BackendFactory factory, ServiceOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->db = std::move(db);
  impl_->factory = std::move(factory);
  impl_->options = std::move(options);
  impl_->routes();
  impl_->restore();
}

SessionService::~SessionService() { stop(); }

int SessionService::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorKind::InvalidArgument, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void SessionService::run() { impl_->server.listen_after_bind(); }

void SessionService::start() {
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void SessionService::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

std::size_t SessionService::restored() const noexcept { return impl_->restored; }

}  // namespace fpd
