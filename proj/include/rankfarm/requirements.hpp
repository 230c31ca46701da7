#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rankfarm/catalog.hpp"

namespace rankfarm {

enum class ModelRequirement { Any, IaaS, PaaS };

struct FunctionalRequirements {
  std::vector<SoftwareVersion> required_software;
  std::vector<std::string> required_engines;
  NodeConfig min_node;  // gpu = true means a GPU is required
  ModelRequirement required_model = ModelRequirement::Any;

  bool operator==(const FunctionalRequirements&) const = default;
};

enum class BoundDirection { LessThan, GreaterThan };

/// A requested QoS value: either a target (`{"value": n}`) or a one-sided
/// bound (`{"bound": n, "direction": "lt"}`).
struct RequestedValue {
  double value = 0.0;
  std::optional<BoundDirection> bound;

  bool is_target() const noexcept { return !bound.has_value(); }
  bool operator==(const RequestedValue&) const = default;
};

struct RequirementSet {
  FunctionalRequirements functional;
  std::map<std::string, RequestedValue> requested_qos;
  std::map<std::string, double> weight_overrides;

  bool operator==(const RequirementSet&) const = default;
};

/// Overrides the named node weights and re-balances each affected sibling
/// set. Overridden siblings keep their value; the remaining mass is shared
/// by the untouched siblings in proportion to their previous weights. When
/// every sibling is overridden the set is divided by its sum. Applying the
/// same overrides twice gives the same hierarchy.
QoSHierarchy apply_weight_overrides(const QoSHierarchy& hierarchy, const std::map<std::string, double>& overrides);

RequirementSet requirements_from_json(const nlohmann::json& j, const QoSHierarchy& hierarchy);
nlohmann::json requirements_to_json(const RequirementSet& req);
RequirementSet load_requirements(const std::filesystem::path& path, const QoSHierarchy& hierarchy);

}  // namespace rankfarm
