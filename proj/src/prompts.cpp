#include "fpd/prompts.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>
#include <vector>

#include "fpd/error.hpp"

#ifndef FPD_ASSET_DIR
#define FPD_ASSET_DIR "assets"
#endif

namespace fpd {

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read prompt asset " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::pair<Role, const char*> kSystemFiles[] = {
    {Role::GroupManager, "group_manager.txt"}, {Role::Task, "task.txt"},
    {Role::Plan, "plan.txt"},                  {Role::Waypoint, "waypoint.txt"},
    {Role::Calculate, "calculate.txt"},        {Role::Render, "render.txt"},
    {Role::FixWaypoint, "fix_waypoint.txt"},
};

}  // namespace

const char* to_string(Role role) {
  switch (role) {
    case Role::GroupManager: return "GroupManager";
    case Role::Task: return "TaskAgent";
    case Role::Plan: return "PlanAgent";
    case Role::Waypoint: return "WaypointAgent";
    case Role::Calculate: return "CalculateAgent";
    case Role::Render: return "RenderAgent";
    case Role::FixWaypoint: return "FixWaypointAgent";
    case Role::User: return "User";
    case Role::Tool: return "Tool";
  }
  return "?";
}

std::optional<Role> role_from_string(std::string_view name) {
  for (Role r : {Role::GroupManager, Role::Task, Role::Plan, Role::Waypoint, Role::Calculate, Role::Render,
                 Role::FixWaypoint, Role::User, Role::Tool}) {
    if (name == to_string(r)) return r;
  }
  return std::nullopt;
}

const std::string& PromptSet::system_prompt(Role role) const {
  static const std::string empty;
  const auto it = system.find(role);
  return it == system.end() ? empty : it->second;
}

std::string PromptSet::decision_system_prompt(Role role) const {
  std::string out = system_prompt(role);
  if (!rules.empty()) out += "\nRules:\n" + rules;
  return out;
}

std::filesystem::path default_asset_dir() {
  if (const char* env = std::getenv("FPD_ASSET_DIR"); env != nullptr && *env != '\0') return env;
  return FPD_ASSET_DIR;
}

PromptSet load_prompts(const std::filesystem::path& asset_dir) {
  PromptSet set;
  const auto prompts = asset_dir / "prompts";
  for (const auto& [role, file] : kSystemFiles) set.system[role] = read_text(prompts / file);
  set.input_transfer[Role::Plan] = read_text(prompts / "plan_input.txt");
  set.input_transfer[Role::Waypoint] = read_text(prompts / "waypoint_input.txt");

  const auto rules_dir = asset_dir / "rules";
  if (std::filesystem::is_directory(rules_dir)) {
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(rules_dir)) {
      if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      if (!set.rules.empty()) set.rules += '\n';
      set.rules += read_text(f);
    }
  }
  return set;
}

std::shared_ptr<const PromptSet> default_prompts() {
  static std::once_flag once;
  static std::shared_ptr<const PromptSet> cached;
  std::call_once(once, [] { cached = std::make_shared<const PromptSet>(load_prompts(default_asset_dir())); });
  return cached;
}

}  // namespace fpd
