#include <chrono>
#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fpd/error.hpp"
#include "fpd/export_render.hpp"
#include "fpd/metrics.hpp"
#include "fpd/remote_backend.hpp"
#include "fpd/replay_backend.hpp"
#include "fpd/scripted_backend.hpp"
#include "fpd/service.hpp"
#include "fpd/session.hpp"

#ifndef FPD_DATA_DIR
#define FPD_DATA_DIR "data"
#endif

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitBackend = 3;

std::string default_navdata() {
  if (const char* env = std::getenv("FPD_NAVDATA"); env != nullptr && *env != '\0') return env;
  return std::string(FPD_DATA_DIR) + "/navdata.json";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw fpd::ParseError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw fpd::Error(fpd::ErrorKind::InvalidArgument, "cannot write " + path.string());
  out << text;
}

std::unique_ptr<fpd::DecisionBackend> make_backend(const std::string& kind, const std::string& script_path) {
  if (kind == "scripted") return std::make_unique<fpd::ScriptedBackend>();
  if (kind == "remote") return std::make_unique<fpd::RemoteBackend>(fpd::EndpointConfig::from_environment());
  if (script_path.empty()) throw fpd::Error(fpd::ErrorKind::InvalidArgument, "--backend replay needs --script");
  return std::make_unique<fpd::ReplayBackend>(
      fpd::script_from_transcript(fpd::transcript_from_jsonl(read_file(script_path))));
}

// Reads one fix command per paused round from stdin; EOF means no fix.
void supervise(fpd::DesignSession& s) {
  std::cout << "round " << s.round << " waypoints:";
  for (const auto& w : s.waypoints) std::printf(" [%.6f,%.6f]", w.lat, w.lon);
  std::cout << "\nfeedback> " << std::flush;
  std::string line;
  if (!std::getline(std::cin, line)) line = "no fix";
  while (true) {
    try {
      fpd::apply_fix(s, fpd::parse_fix_command(line));
      return;
    } catch (const fpd::Error& e) {
      std::cout << "rejected: " << e.what() << "\nfeedback> " << std::flush;
      if (!std::getline(std::cin, line)) line = "no fix";
    }
  }
}

fpd::DesignSession run_design(const fpd::NavDatabase& db, const std::string& icao, const std::string& runway,
                              const std::string& destination, bool interactive, fpd::DecisionBackend& backend) {
  fpd::SessionConfig cfg;
  cfg.interactive = interactive;
  fpd::DesignSession s = fpd::create_session(db, icao, runway, destination, cfg);
  while (true) {
    if (s.status == fpd::SessionStatus::Planning) {
      try {
        fpd::step(s, backend);
      } catch (const fpd::ParseError& e) {
        std::fprintf(stderr, "agent reply rejected twice: %s\n", e.what());
        return s;
      }
    } else if (s.status == fpd::SessionStatus::AwaitingFeedback) {
      supervise(s);
    } else {
      return s;
    }
  }
}

int cmd_design(const std::string& navdata, const std::string& icao, const std::string& runway,
               const std::string& destination, const std::string& backend_kind, const std::string& script,
               bool interactive, const std::string& out_dir) {
  const auto db = fpd::load_database(navdata);
  auto backend = make_backend(backend_kind, script);
  const fpd::DesignSession s = run_design(db, icao, runway, destination, interactive, *backend);

  const std::filesystem::path dir = out_dir.empty() ? std::filesystem::path(".") : std::filesystem::path(out_dir);
  std::filesystem::create_directories(dir);
  const std::string base = s.task.procedure;
  const auto report = fpd::evaluate_run(db, std::vector<fpd::DesignSession>{s});
  write_file(dir / (base + ".transcript.jsonl"), fpd::transcript_to_jsonl(s.transcript));
  write_file(dir / (base + ".geojson"), fpd::render_geojson(s) + "\n");
  write_file(dir / (base + ".report.json"), fpd::report_to_json(report).dump(2) + "\n");
  if (!s.waypoints.empty()) write_file(dir / (base + ".txt"), fpd::export_txt(s));

  std::cout << s.task.procedure << ": " << fpd::to_string(s.status) << " after " << s.round << " rounds, "
            << s.waypoints.size() << " waypoints\n";
  std::cout << fpd::report_table(s.task.procedure, report);
  return s.status == fpd::SessionStatus::Failed ? kExitBackend : 0;
}

int cmd_evaluate(const std::string& navdata, const std::string& icao, const std::string& backend_kind,
                 const std::string& script, const std::string& json_out) {
  const auto db = fpd::load_database(navdata);
  const fpd::Airport& airport = fpd::lookup_airport(db, icao);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<fpd::DesignSession> sessions;
  for (const auto& proc : airport.procedures) {
    auto backend = make_backend(backend_kind, script);
    fpd::DesignSession s = fpd::create_session(db, airport.icao, proc.runway, proc.destination);
    try {
      while (s.status == fpd::SessionStatus::Planning) fpd::step(s, *backend);
    } catch (const fpd::ParseError& e) {
      std::fprintf(stderr, "%s: agent reply rejected twice: %s\n", proc.name.c_str(), e.what());
    }
    sessions.push_back(std::move(s));
  }
  const auto report = fpd::evaluate_run(db, sessions);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  nlohmann::json j = fpd::report_to_json(report);
  j["airport"] = airport.icao;
  j["backend"] = backend_kind;
  j["elapsed_s"] = secs;
  if (!json_out.empty()) {
    write_file(json_out, j.dump(2) + "\n");
  } else {
    std::cout << j.dump(2) << "\n";
  }
  std::cout << fpd::report_table(airport.icao + "/" + backend_kind, report);
  std::printf("waypoint histogram:");
  for (const auto& [n, count] : report.waypoint_histogram) std::printf(" %d:%d", n, count);
  std::printf("\n");
  return 0;
}

int cmd_validate(const std::string& navdata, const std::string& file, const std::string& icao) {
  const auto db = fpd::load_database(navdata);
  const auto design = fpd::import_txt(read_file(file), db,
                                      icao.empty() ? std::nullopt : std::optional<std::string_view>(icao));
  const auto report = fpd::evaluate_designs(db, std::vector<fpd::ProcedureDesign>{design});
  std::cout << fpd::report_to_json(report).dump(2) << "\n";
  std::cout << fpd::report_table(design.procedure, report);
  return 0;
}

fpd::SessionService* g_service = nullptr;

void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

int cmd_serve(const std::string& navdata, const std::string& host, int port, const std::string& sessions_dir) {
  auto db = std::make_shared<const fpd::NavDatabase>(fpd::load_database(navdata));
  fpd::ServiceOptions opts;
  opts.sessions_dir = sessions_dir;
  fpd::SessionService service(db, fpd::default_backend_factory(), opts);
  const int bound = service.bind(host, port);
  std::printf("listening on %s:%d (%zu stored sessions)\n", host.c_str(), bound, service.restored());
  std::fflush(stdout);
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  service.run();
  g_service = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Departure procedure design engine"};
  app.require_subcommand(1);
  std::string navdata = default_navdata();
  app.add_option("--navdata", navdata, "navigation dataset JSON");

  std::string icao, runway, destination, backend = "scripted", script, out_dir, json_out, file, host = "127.0.0.1",
                                         sessions_dir;
  bool interactive = false;
  int port = 8080;

  auto* design = app.add_subcommand("design", "design one procedure");
  design->add_option("--airport", icao)->required();
  design->add_option("--runway", runway)->required();
  design->add_option("--destination", destination)->required();
  design->add_option("--backend", backend)->check(CLI::IsMember({"scripted", "remote", "replay"}));
  design->add_option("--script", script, "transcript JSON Lines for --backend replay");
  design->add_flag("--interactive", interactive, "pause for fix commands on stdin after every round");
  design->add_option("--out", out_dir, "output directory");

  auto* evaluate = app.add_subcommand("evaluate", "design every reference procedure of an airport");
  evaluate->add_option("--airport", icao)->required();
  evaluate->add_option("--backend", backend)->check(CLI::IsMember({"scripted", "remote", "replay"}));
  evaluate->add_option("--script", script);
  evaluate->add_option("--json", json_out, "write the report here instead of stdout");

  auto* validate = app.add_subcommand("validate", "assess an exported procedure file");
  validate->add_option("file", file)->required();
  validate->add_option("--airport", icao);

  auto* serve = app.add_subcommand("serve", "run the HTTP session service");
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--sessions-dir", sessions_dir, "persist transcripts here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*design) return cmd_design(navdata, icao, runway, destination, backend, script, interactive, out_dir);
    if (*evaluate) return cmd_evaluate(navdata, icao, backend, script, json_out);
    if (*validate) return cmd_validate(navdata, file, icao);
    if (*serve) return cmd_serve(navdata, host, port, sessions_dir);
  } catch (const fpd::BackendError& e) {
    std::fprintf(stderr, "backend error: %s\n", e.what());
    return kExitBackend;
  } catch (const fpd::ParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  } catch (const fpd::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.kind() == fpd::ErrorKind::InvalidArgument ? kExitUsage : kExitData;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
  return kExitUsage;
}
