#pragma once

#include <optional>
#include <string_view>

namespace fpd {

// Transcript speakers: the seven agents plus the human supervisor and tool results.
enum class Role { GroupManager, Task, Plan, Waypoint, Calculate, Render, FixWaypoint, User, Tool };

inline constexpr Role kAgentRoles[] = {Role::GroupManager, Role::Task,   Role::Plan,       Role::Waypoint,
                                       Role::Calculate,    Role::Render, Role::FixWaypoint};

// "GroupManager", "TaskAgent", "PlanAgent", ... "User", "Tool"
const char* to_string(Role role);
std::optional<Role> role_from_string(std::string_view name);

}  // namespace fpd
