#include "rankfarm/matcher.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "json_util.hpp"

namespace rankfarm {

namespace {

std::string fold(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  std::string out(s.substr(first, last - first + 1));
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<Rejection> check(const ServiceOffering& o, const FunctionalRequirements& req) {
  for (const auto& want : req.required_software) {
    const bool found = std::any_of(o.software_versions.begin(), o.software_versions.end(), [&](const auto& have) {
      return fold(have.name) == fold(want.name) && fold(have.version) == fold(want.version);
    });
    if (!found) return Rejection{o.service_id, RejectReason::Software, "missing " + want.name + " " + want.version};
  }
  for (const auto& want : req.required_engines) {
    const bool found = std::any_of(o.render_engines.begin(), o.render_engines.end(),
                                   [&](const auto& have) { return fold(have) == fold(want); });
    if (!found) return Rejection{o.service_id, RejectReason::Engine, "missing render engine " + want};
  }
  const auto& need = req.min_node;
  const auto& have = o.node_config;
  if (have.memory_gb < need.memory_gb) {
    return Rejection{o.service_id, RejectReason::NodeConfig,
                     "memory " + detail::format_number(have.memory_gb) + " GB < " + detail::format_number(need.memory_gb)};
  }
  if (have.cpu_cores < need.cpu_cores) {
    return Rejection{o.service_id, RejectReason::NodeConfig,
                     "cpu cores " + std::to_string(have.cpu_cores) + " < " + std::to_string(need.cpu_cores)};
  }
  if (have.disk_gb < need.disk_gb) {
    return Rejection{o.service_id, RejectReason::NodeConfig,
                     "disk " + detail::format_number(have.disk_gb) + " GB < " + detail::format_number(need.disk_gb)};
  }
  if (need.gpu && !have.gpu) return Rejection{o.service_id, RejectReason::NodeConfig, "GPU required"};

  const bool model_ok = req.required_model == ModelRequirement::Any ||
                        (req.required_model == ModelRequirement::IaaS && o.service_model == ServiceModel::IaaS) ||
                        (req.required_model == ModelRequirement::PaaS && o.service_model == ServiceModel::PaaS);
  if (!model_ok) {
    return Rejection{o.service_id, RejectReason::Model, "service model is " + std::string(to_string(o.service_model))};
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(RejectReason r) noexcept {
  switch (r) {
    case RejectReason::Software: return "SOFTWARE";
    case RejectReason::Engine: return "ENGINE";
    case RejectReason::NodeConfig: return "NODE_CONFIG";
    case RejectReason::Model: return "MODEL";
  }
  return "SOFTWARE";
}

MatchResult fn_match(const Catalog& catalog, const FunctionalRequirements& req) {
  MatchResult result;
  for (const auto& o : catalog.offerings) {
    if (auto rejection = check(o, req)) {
      result.rejected.push_back(std::move(*rejection));
    } else {
      result.matched.push_back(o.service_id);
    }
  }
  return result;
}

}  // namespace rankfarm
