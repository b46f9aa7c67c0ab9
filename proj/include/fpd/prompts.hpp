#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>

#include "fpd/agent.hpp"

namespace fpd {

// System prompts per agent plus the free-text design rules. Loaded from
// <dir>/prompts/*.txt and <dir>/rules/*.txt; nothing in them is interpreted.
struct PromptSet {
  std::map<Role, std::string> system;
  std::map<Role, std::string> input_transfer;  // Plan and Waypoint tool-argument prompts
  std::string rules;                           // all rule files, name order, blank-line separated

  const std::string& system_prompt(Role role) const;
  // The prompt a decision model receives: its system prompt followed by the rules.
  std::string decision_system_prompt(Role role) const;
};

std::filesystem::path default_asset_dir();
PromptSet load_prompts(const std::filesystem::path& asset_dir);
std::shared_ptr<const PromptSet> default_prompts();

}  // namespace fpd
