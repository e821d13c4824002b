#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "radpi/diagnostic.hpp"
#include "radpi/rad_model.hpp"

namespace radpi::rad {

struct ParseResult {
  std::optional<RadModel> model;      // set iff no error diagnostics
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return model.has_value(); }
};

/// Parses ".rad" source text. `file` is only used for diagnostic spans.
/// All top-level declarations are attempted; each reports at most one error.
ParseResult parse_rad(std::string_view text, std::string file = {});

/// Canonical text: fixed clause order, two-space indent, LF line endings,
/// comments dropped. parse_rad(emit_rad(m)) is structurally equal to m.
std::string emit_rad(const RadModel& model);

}  // namespace radpi::rad
