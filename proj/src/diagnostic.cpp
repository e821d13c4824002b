#include "radpi/diagnostic.hpp"

#include <algorithm>
#include <array>

namespace radpi {

namespace {
constexpr std::array kAllCodes = {
    codes::syntax,       codes::duplicate,    codes::empty_model, codes::empty_role,
    codes::unknown_ref,  codes::interaction,  codes::interact_side, codes::scope,
    codes::case_shape,   codes::case_default, codes::part,        codes::loop,
    codes::unreachable,  codes::stub,         codes::manual,      codes::rule1,
    codes::rule3,        codes::rule4,        codes::rule5,       codes::rule9,
    codes::rule10,       codes::rule11,
};
}  // namespace

bool is_known_code(std::string_view code) {
  return std::find(kAllCodes.begin(), kAllCodes.end(), code) != kAllCodes.end();
}

Diagnostic make_error(std::string_view code, std::string message, SourceSpan span) {
  return Diagnostic{Severity::error, std::string(code), std::move(message), std::move(span)};
}

Diagnostic make_warning(std::string_view code, std::string message, SourceSpan span) {
  return Diagnostic{Severity::warning, std::string(code), std::move(message), std::move(span)};
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return count(diags, Severity::error) > 0;
}

std::size_t count(const std::vector<Diagnostic>& diags, Severity severity) {
  return static_cast<std::size_t>(std::count_if(
      diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.severity == severity; }));
}

std::string format(const Diagnostic& diag) {
  std::string out = diag.span.file.empty() ? std::string("<input>") : diag.span.file;
  out += ':' + std::to_string(diag.span.line) + ':' + std::to_string(diag.span.column) + ": ";
  out += diag.severity == Severity::error ? "error" : "warning";
  out += " [" + diag.code + "] " + diag.message;
  return out;
}

}  // namespace radpi
