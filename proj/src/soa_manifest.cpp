#include "radpi/soa_manifest.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

#include "radpi/translator.hpp"

namespace radpi::soa {

using rad::RadModel;

namespace {

void push_unique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

void collect(const rad::NodeList& nodes, ServiceManifest& m) {
  for (const auto& n : nodes) {
    if (const auto* a = n.as<rad::Activity>()) {
      push_unique(a->kind == rad::ActivityKind::manual ? m.excluded_manual : m.internal_activities, a->name);
    } else if (const auto* ip = n.as<rad::InteractionPoint>()) {
      collect(ip->before_reply, m);
    } else if (const auto* c = n.as<rad::Case>()) {
      for (const auto& b : c->branches) collect(b.body, m);
      if (c->otherwise) collect(*c->otherwise, m);
    } else if (const auto* p = n.as<rad::Part>()) {
      for (const auto& t : p->threads) collect(t, m);
    }
  }
}

}  // namespace

std::vector<ServiceManifest> emit_manifest(const RadModel& model) {
  auto symbols = translate::build_symbols(model);
  std::vector<ServiceManifest> out;
  for (const auto& role : model.roles) {
    if (role.stub) continue;
    ServiceManifest m;
    m.service_name = symbols.role_constant.at(role.name);
    m.role = role.name;
    for (const auto& d : model.interactions) {
      if (d.initiator == role.name) m.requires_.push_back(d.id);
      else if (std::find(d.responders.begin(), d.responders.end(), role.name) != d.responders.end())
        m.provides.push_back(d.id);
    }
    collect(role.body, m);
    std::size_t distinct = m.internal_activities.size() + m.excluded_manual.size();
    if (distinct > kGranularityThreshold)
      m.granularity_note = "role has " + std::to_string(distinct) + " distinct activities (more than " +
                           std::to_string(kGranularityThreshold) +
                           "); consider splitting it into several services";
    out.push_back(std::move(m));
  }
  return out;
}

std::string to_json(const ServiceManifest& m) {
  nlohmann::ordered_json j;
  j["service_name"] = m.service_name;
  j["role"] = m.role;
  j["provides"] = m.provides;
  j["requires"] = m.requires_;
  j["internal_activities"] = m.internal_activities;
  j["excluded_manual"] = m.excluded_manual;
  j["granularity_note"] = m.granularity_note;
  return j.dump(2) + "\n";
}

std::vector<std::filesystem::path> write_manifests(const std::vector<ServiceManifest>& manifests,
                                                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& m : manifests) {
    auto path = dir / (m.service_name + ".manifest.json");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << to_json(m);
    if (!f) throw std::runtime_error("failed writing " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace radpi::soa
