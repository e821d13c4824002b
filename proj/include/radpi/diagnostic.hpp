#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace radpi {

struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int length = 0;
};

enum class Severity { error, warning };

/// Closed set of diagnostic codes. docs/diagnostics.md lists each one.
namespace codes {
inline constexpr std::string_view syntax = "syntax";
inline constexpr std::string_view duplicate = "duplicate";
inline constexpr std::string_view empty_model = "empty-model";
inline constexpr std::string_view empty_role = "empty-role";
inline constexpr std::string_view unknown_ref = "unknown-ref";
inline constexpr std::string_view interaction = "interaction";
inline constexpr std::string_view interact_side = "interact-side";
inline constexpr std::string_view scope = "scope";
inline constexpr std::string_view case_shape = "case";
inline constexpr std::string_view case_default = "case-default";
inline constexpr std::string_view part = "part";
inline constexpr std::string_view loop = "loop";
inline constexpr std::string_view unreachable = "unreachable";
inline constexpr std::string_view stub = "stub";
inline constexpr std::string_view manual = "manual";
inline constexpr std::string_view rule1 = "rule-1";
inline constexpr std::string_view rule3 = "rule-3";
inline constexpr std::string_view rule4 = "rule-4";
inline constexpr std::string_view rule5 = "rule-5";
inline constexpr std::string_view rule9 = "rule-9";
inline constexpr std::string_view rule10 = "rule-10";
inline constexpr std::string_view rule11 = "rule-11";
}  // namespace codes

bool is_known_code(std::string_view code);

struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  std::string message;
  SourceSpan span;
};

Diagnostic make_error(std::string_view code, std::string message, SourceSpan span = {});
Diagnostic make_warning(std::string_view code, std::string message, SourceSpan span = {});

bool has_errors(const std::vector<Diagnostic>& diags);
std::size_t count(const std::vector<Diagnostic>& diags, Severity severity);

// "file:line:col: error [code] message"
std::string format(const Diagnostic& diag);

}  // namespace radpi
