#pragma once

// Reduction semantics over closed Pi-Calculus states.
//
// A state is the list of running parallel components. Components are kept
// head-normal: matches at the head are resolved, calls at the head are
// unfolded, restrictions at the head are opened with fresh '#k' names and
// stop() components are dropped. The component list, with fresh names
// renamed canonically, is the state identity.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "radpi/pi_core.hpp"

namespace radpi::pi {

enum class EventKind { comm, internal, done, inject };

std::string_view to_string(EventKind kind);

struct Event {
  EventKind kind = EventKind::internal;
  std::string label;
  bool operator==(const Event&) const = default;
};

/// A message offered by the environment on a channel.
struct EnvMessage {
  Channel chan;
  std::vector<std::string> values;
  bool operator==(const EnvMessage&) const = default;
  auto operator<=>(const EnvMessage&) const = default;
};

std::string label_of(const Channel& chan, const std::vector<std::string>& values);

struct ExecState {
  std::vector<Term> components;             // canonical, sorted by key()
  std::uint64_t fresh_counter = 0;          // next fresh index; not part of identity
  std::vector<EnvMessage> pending_events;   // injected, not yet consumed; sorted

  /// Identity string: equal keys iff structurally congruent states.
  std::string key() const;
  bool terminated() const { return components.empty(); }
};

struct Step {
  Event event;
  ExecState target;
};

struct UnfoldBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kDefaultUnfoldBudget = 64;

struct ReductionOptions {
  // Messages the environment can always supply (exploration mode).
  std::vector<EnvMessage> env_offers;
  int unfold_budget = kDefaultUnfoldBudget;
};

ExecState initial_state(const PiSystem& system, const ReductionOptions& options = {});

/// Builds a canonical state from arbitrary top-level terms.
ExecState make_state(const PiSystem& system, std::vector<Term> terms, const ReductionOptions& options = {});

/// Every enabled reduction, one per (redex, branch) choice, in a
/// deterministic order. Targets are canonical states.
std::vector<Step> enabled_steps(const PiSystem& system, const ExecState& state,
                                const ReductionOptions& options = {});

/// enabled_steps deduplicated by target state, sorted by (label, target).
std::vector<Step> successors(const PiSystem& system, const ExecState& state,
                             const ReductionOptions& options = {});

enum class Quiescence { terminated, blocked_on_environment, deadlock };

/// Classifies a state that has no successors: no components left, some
/// component waiting for input on an environment channel, or a deadlock.
Quiescence classify_stuck(const PiSystem& system, const ExecState& state);

/// Adds an environment message to the state's pending events.
ExecState inject(const ExecState& state, EnvMessage message);

std::string pretty_state(const ExecState& state);

}  // namespace radpi::pi
