#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fpd/backend.hpp"
#include "fpd/navdata.hpp"
#include "fpd/replay_backend.hpp"
#include "fpd/session.hpp"

#ifndef FPD_TEST_DATA
#define FPD_TEST_DATA "data"
#endif
#ifndef FPD_TEST_FIXTURES
#define FPD_TEST_FIXTURES "tests/fixtures"
#endif

namespace testing_support {

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string fixture(const std::string& name) {
  return read_text(std::filesystem::path(FPD_TEST_FIXTURES) / name);
}

inline const fpd::NavDatabase& navdata() {
  static const fpd::NavDatabase db = fpd::load_database(std::filesystem::path(FPD_TEST_DATA) / "navdata.json");
  return db;
}

// The three finished waypoints printed above the recorded Plan reply.
inline std::vector<fpd::GeoPoint> recorded_finished_waypoints() {
  return {{30.672785, 103.991117}, {30.709621, 104.008689}, {30.820674, 104.13808}};
}

inline fpd::ReplayScript recorded_round_script() {
  return {{fpd::Role::Plan, fixture("round4_plan.txt")}, {fpd::Role::Waypoint, fixture("round4_waypoint.txt")}};
}

// ZUUU 02L -> GURET seeded with the finished waypoints, not yet stepped.
inline fpd::DesignSession recorded_round_session(const fpd::SessionConfig& cfg = {}) {
  fpd::DesignSession s = fpd::create_session(navdata(), "ZUUU", "02L", "GURET", cfg);
  fpd::seed_waypoints(s, recorded_finished_waypoints());
  return s;
}

// Backend driven by a callback, for shapes no recorded script covers.
class LambdaBackend final : public fpd::DecisionBackend {
 public:
  using Fn = std::function<std::string(fpd::Role, const fpd::DecisionView&)>;
  explicit LambdaBackend(Fn fn) : fn_(std::move(fn)) {}
  fpd::BackendKind kind() const noexcept override { return fpd::BackendKind::Scripted; }
  fpd::ChatReply decide(fpd::Role role, const fpd::ChatRequest&, const fpd::DecisionView& view) override {
    ++calls;
    return {fn_(role, view), {}, {}};
  }
  int calls = 0;

 private:
  Fn fn_;
};

inline void run_to_end(fpd::DesignSession& s, fpd::DecisionBackend& backend) {
  while (s.status == fpd::SessionStatus::Planning) fpd::step(s, backend);
}

}  // namespace testing_support
