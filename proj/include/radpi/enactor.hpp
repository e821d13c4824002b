#pragma once

// Simulation and bounded exploration of Pi-Calculus systems.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "radpi/reduction.hpp"

namespace radpi::enact {

struct TraceEvent {
  int step = 0;
  pi::EventKind kind = pi::EventKind::internal;
  std::string label;
  bool operator==(const TraceEvent&) const = default;
};

enum class EndReason { terminated, deadlock, blocked, truncated, script_end };
std::string_view to_string(EndReason reason);

struct Trace {
  std::vector<TraceEvent> events;
  EndReason end = EndReason::terminated;
  std::string final_state;
};

/// One line per event: "step<TAB>kind<TAB>label".
std::string format_trace(const Trace& trace);

/// "chan" or "chan:v1,v2". Throws std::invalid_argument.
pi::EnvMessage parse_env_message(std::string_view text);

struct Injection {
  int step = 1;  // trace step at which the message is offered
  pi::EnvMessage message;
};

/// "step:chan:v1,v2". Throws std::invalid_argument.
Injection parse_injection(std::string_view text);

// Script lines: an event label to take, or "inject CHAN v1,v2".
// Blank lines and lines starting with '#' are ignored.
struct ScriptEntry {
  std::optional<pi::EnvMessage> inject;
  std::string label;
  int line = 0;
};

std::vector<ScriptEntry> parse_script(std::string_view text);

struct ScriptMismatch : std::runtime_error {
  ScriptMismatch(const ScriptEntry& entry, int step, std::vector<std::string> enabled);
  int line;
  int step;
  std::vector<std::string> enabled;
};

struct SimulationOptions {
  std::uint64_t seed = 0;
  std::optional<std::vector<ScriptEntry>> script;  // random scheduling when empty
  std::vector<Injection> injections;
  int max_steps = 1000;
  int unfold_budget = pi::kDefaultUnfoldBudget;
};

/// Runs one execution. Throws ScriptMismatch when a script label is not
/// enabled and pi::UnfoldBudgetExceeded on unguarded recursion.
Trace simulate(const pi::PiSystem& system, const SimulationOptions& options);

struct ExploreOptions {
  std::vector<pi::EnvMessage> env_offers;
  std::size_t state_bound = 100000;
  std::size_t depth_bound = 10000;
  unsigned workers = 1;
  int unfold_budget = pi::kDefaultUnfoldBudget;
};

struct ExplorationResult {
  std::size_t states_visited = 0;
  std::size_t transitions = 0;
  std::vector<std::string> deadlocks;   // pretty summaries, discovery order
  std::size_t environment_waits = 0;    // stuck states waiting on the environment
  std::size_t terminated_states = 0;
  std::size_t max_depth = 0;
  bool done_reachable = false;
  bool bound_hit = false;
};

/// Level-synchronous breadth-first search over canonical states. The
/// successors of a level are computed by `workers` threads and merged in
/// frontier order, so the result does not depend on the worker count.
ExplorationResult explore(const pi::PiSystem& system, const ExploreOptions& options);

/// "key: value" lines, or "key=value" lines when `machine` is set.
std::string format_report(const ExplorationResult& result, bool machine);

/// Copy of `system` whose main keeps only the calls to `constants`.
/// Throws std::invalid_argument if a constant is not called from main.
pi::PiSystem restrict_main(const pi::PiSystem& system, const std::vector<std::string>& constants);

}  // namespace radpi::enact
