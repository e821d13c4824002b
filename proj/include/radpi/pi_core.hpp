#pragma once

// Meta-operations on Pi-Calculus terms: free names, capture-avoiding
// substitution, structural-congruence normal form.
//
// Names starting with '%' are produced by normalize for bound names and
// names starting with '#' are fresh runtime names; neither may appear in
// source models.

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "radpi/pi_term.hpp"

namespace radpi::pi {

using NameMap = std::map<std::string, std::string>;

struct Definition {
  std::string name;
  std::vector<std::string> params;
  Term body;
};

/// Process definitions plus the main composition.
struct PiSystem {
  std::string name;
  Term main;
  std::vector<Channel> ports;             // interaction ports, declaration order
  std::set<Channel> open_channels;        // channels whose other side is the environment
  std::set<std::string> globals;          // free names defs may mention besides their params

  const std::vector<Definition>& defs() const { return defs_; }
  const Definition* find(std::string_view constant) const;
  void add(Definition def);  // throws std::invalid_argument on a duplicate name

 private:
  std::vector<Definition> defs_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

/// Invariant violations of a system: unresolved or arity-mismatched calls,
/// lower-case constants, repeated binders, unflattened Par/Sum, free names
/// outside params and globals. Empty when the system is well formed.
std::vector<std::string> check_system(const PiSystem& system);

std::set<std::string> free_names(const Term& t);

/// Replaces free occurrences of each key by its value. Input binders and
/// restricted names that would capture a substituted value are renamed to
/// "<name>_<k>" with the least k >= 1 that is not already in use.
Term substitute(const Term& t, const NameMap& mapping);

/// Canonical representative of the structural-congruence class: Par and Sum
/// flattened, stop() units removed, children sorted by key(); unused
/// restrictions removed; match on identical names resolved; bound names
/// renamed positionally to %0, %1, ... by binder depth. Idempotent.
Term normalize(const Term& t);

bool struct_congruent(const Term& p, const Term& q);

}  // namespace radpi::pi
