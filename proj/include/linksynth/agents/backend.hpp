#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace linksynth::agents {

enum class Role { Topology, Critic, Planner, Refiner };

inline std::string_view role_name(Role r) {
  switch (r) {
    case Role::Topology: return "topology";
    case Role::Critic: return "critic";
    case Role::Planner: return "planner";
    case Role::Refiner: return "refiner";
  }
  return "?";
}

struct AgentRequest {
  Role role = Role::Topology;
  std::string prompt;   // role instructions
  std::string context;  // task data: intent, target, bundle, report, linkage JSON
};

/// Network / endpoint failure. Aborts the current episode.
struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Text-in, text-out model interface. Implementations must be callable from
/// several threads at once or serialise internally.
class AgentBackend {
 public:
  virtual ~AgentBackend() = default;
  /// Returns the response text or throws TransportError.
  virtual std::string complete(const AgentRequest &req) = 0;
  virtual std::string name() const = 0;
  virtual double temperature() const = 0;
};

}  // namespace linksynth::agents
