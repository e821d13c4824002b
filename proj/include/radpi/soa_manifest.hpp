#pragma once

// Per-role service descriptors derived from a RAD model.

#include <filesystem>
#include <string>
#include <vector>

#include "radpi/rad_model.hpp"

namespace radpi::soa {

inline constexpr std::size_t kGranularityThreshold = 12;

struct ServiceManifest {
  std::string service_name;  // process constant of the role
  std::string role;
  std::vector<std::string> provides;             // interactions the role responds to
  std::vector<std::string> requires_;            // interactions the role initiates
  std::vector<std::string> internal_activities;  // distinct non-manual activities, first-use order
  std::vector<std::string> excluded_manual;      // distinct manual activities
  std::string granularity_note;                  // empty unless the role is coarse-grained
};

/// One manifest per non-stub role, in declaration order.
std::vector<ServiceManifest> emit_manifest(const rad::RadModel& model);

/// JSON text with a fixed key order and a trailing newline.
std::string to_json(const ServiceManifest& manifest);

/// Writes <dir>/<service_name>.manifest.json for each manifest and returns
/// the written paths. Creates `dir` if needed.
std::vector<std::filesystem::path> write_manifests(const std::vector<ServiceManifest>& manifests,
                                                   const std::filesystem::path& dir);

}  // namespace radpi::soa
