#pragma once

// RAD model to Pi-Calculus system compiler.

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "radpi/diagnostic.hpp"
#include "radpi/pi_core.hpp"
#include "radpi/rad_model.hpp"

namespace radpi::translate {

struct SymbolTable {
  std::map<std::string, std::string> role_constant;        // role name -> process constant
  std::map<std::string, std::string> role_port_prefix;     // role name -> port participant
  std::map<std::string, pi::Channel> interaction_port;     // interaction id -> port
  std::map<std::string, std::string> environment_channel;  // role name -> env channel
};

struct TranslationError : std::runtime_error {
  explicit TranslationError(std::vector<Diagnostic> diags);
  std::vector<Diagnostic> diagnostics;
};

/// The override if given; otherwise the role name with its first letter
/// capitalized, '_' removed and cut to 8 characters, plus the least numeric
/// suffix that avoids `taken`.
std::string mangle_identifier(const std::string& role_name, const std::optional<std::string>& override_symbol,
                              const std::set<std::string>& taken);

/// Port with participants [initiator, responders...] by port prefix.
pi::Channel port_name(const rad::InteractionDecl& decl, const SymbolTable& table);

/// Builds constants and port prefixes for every role, then every port.
SymbolTable build_symbols(const rad::RadModel& model);

struct Translation {
  pi::PiSystem system;
  SymbolTable symbols;
  std::vector<Diagnostic> warnings;  // translation-time only (case-default)
};

/// Throws TranslationError when validate reports errors.
Translation translate_model(const rad::RadModel& model);

/// Channel name for the external events of a role.
std::string env_channel(const std::string& role_name);
/// Channel name that creates a new instance of an unbounded role.
std::string spawn_channel(const std::string& role_name);

}  // namespace radpi::translate
