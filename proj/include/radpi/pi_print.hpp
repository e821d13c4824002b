#pragma once

#include <string>
#include <string_view>

#include "radpi/pi_core.hpp"

namespace radpi::pi {

// Text notation (".pi"):
//   output        chan<a, b>.K         input        chan(x, y).K
//   zero-arity    chan<>.K / chan?().K internal     label().K
//   inaction      stop()               success      done()
//   parallel      P || Q               choice       {P} + {Q}
//   restriction   (new x, y)(P)        call         Name / Name(a, b)
//   match chain   if (x = a) {P} elseif (x = b) {Q} else {R}
// Ports render as "a/b", "a/b*" (two-way) and "a/b/c".

std::string pretty(const Term& t);

/// Main line "NAME = A || B ...", a "# ports:" comment, then one
/// "Name(params) = body" paragraph per definition in insertion order.
std::string pretty_pi(const PiSystem& system);

struct ParsedPi {
  std::string name;
  Term main;
  std::vector<Definition> defs;
};

/// Reads the notation written by pretty_pi. Whitespace and '#' comments are
/// insignificant. Throws std::runtime_error with a line number on bad input.
ParsedPi read_pi(std::string_view text);

/// Parses a single term in the same notation.
Term read_term(std::string_view text);

}  // namespace radpi::pi
