#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "radpi/rad_parser.hpp"

inline std::string source_path(const std::string& rel) { return std::string(RADPI_SOURCE_DIR) + "/" + rel; }

inline std::string slurp(const std::string& rel) {
  std::ifstream f(source_path(rel), std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline radpi::rad::RadModel load_model(const std::string& rel) {
  auto r = radpi::rad::parse_rad(slurp(rel), rel);
  if (!r.ok()) throw std::runtime_error("cannot parse " + rel);
  return *r.model;
}

inline radpi::rad::RadModel parse_ok(const std::string& text) {
  auto r = radpi::rad::parse_rad(text, "inline.rad");
  if (!r.ok()) throw std::runtime_error("parse failed: " + (r.diagnostics.empty() ? "" : r.diagnostics[0].message));
  return *r.model;
}
