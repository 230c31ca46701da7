#include "rankfarm/requirements.hpp"

#include <cmath>

#include "json_util.hpp"

namespace rankfarm {

using nlohmann::json;

namespace {

constexpr double kWeightTol = 1e-9;

void rebalance(const std::vector<std::pair<std::string, double*>>& siblings,
               const std::map<std::string, double>& overrides, const std::string& parent) {
  double overridden = 0.0;
  double untouched = 0.0;
  std::size_t n_overridden = 0;
  for (const auto& [name, w] : siblings) {
    if (auto it = overrides.find(name); it != overrides.end()) {
      *w = it->second;
      overridden += *w;
      ++n_overridden;
    } else {
      untouched += *w;
    }
  }
  if (n_overridden == 0) return;
  if (n_overridden == siblings.size()) {
    for (const auto& [name, w] : siblings) *w /= overridden;
    return;
  }
  const double remaining = 1.0 - overridden;
  if (remaining <= kWeightTol) {
    throw Error(ErrorCode::WeightError, "overrides under '" + parent + "' sum to " +
                                            detail::format_number(overridden) +
                                            ", leaving no weight for the other siblings");
  }
  for (const auto& [name, w] : siblings) {
    if (!overrides.contains(name)) *w *= remaining / untouched;
  }
}

}  // namespace

QoSHierarchy apply_weight_overrides(const QoSHierarchy& hierarchy, const std::map<std::string, double>& overrides) {
  for (const auto& [node, w] : overrides) {
    if (!hierarchy.contains(node)) throw Error(ErrorCode::UnknownAttribute, "weight override for unknown node '" + node + "'");
    if (!std::isfinite(w) || !(w > 0.0) || w > 1.0) {
      throw Error(ErrorCode::WeightError,
                  "override for '" + node + "' is " + detail::format_number(w) + ", expected (0, 1]");
    }
  }
  QoSHierarchy out = hierarchy;
  if (overrides.empty()) return out;

  std::vector<std::pair<std::string, double*>> groups;
  for (auto& g : out.groups) groups.emplace_back(g.id, &g.weight);
  rebalance(groups, overrides, "groups");
  for (auto& g : out.groups) {
    std::vector<std::pair<std::string, double*>> tops;
    for (auto& t : g.attributes) tops.emplace_back(t.name, &t.weight);
    rebalance(tops, overrides, g.id);
    for (auto& t : g.attributes) {
      std::vector<std::pair<std::string, double*>> subs;
      for (auto& s : t.sub) subs.emplace_back(s.name, &s.weight);
      rebalance(subs, overrides, t.name);
    }
  }
  return out;
}

RequirementSet requirements_from_json(const json& j, const QoSHierarchy& hierarchy) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "requirements must be a JSON object");
  RequirementSet req;

  if (auto it = j.find("functional"); it != j.end() && !it->is_null()) {
    const json& f = *it;
    const std::string ctx = "functional requirements";
    if (!f.is_object()) throw Error(ErrorCode::SchemaError, ctx + " must be an object");
    if (f.contains("software")) {
      for (const json& sw : detail::require_array(f, "software", ctx)) {
        req.functional.required_software.push_back(
            {detail::require<std::string>(sw, "name", ctx + " software"),
             detail::require<std::string>(sw, "version", ctx + " software")});
      }
    }
    if (f.contains("engines")) {
      for (const json& e : detail::require_array(f, "engines", ctx)) {
        if (!e.is_string()) throw Error(ErrorCode::SchemaError, ctx + ": engines must be strings");
        req.functional.required_engines.push_back(e.get<std::string>());
      }
    }
    if (f.contains("min_node")) {
      const json& n = detail::require_object(f, "min_node", ctx);
      auto& m = req.functional.min_node;
      m.memory_gb = detail::optional<double>(n, "memory_gb", ctx + " min_node").value_or(0.0);
      m.cpu_cores = detail::optional<int>(n, "cpu_cores", ctx + " min_node").value_or(0);
      m.disk_gb = detail::optional<double>(n, "disk_gb", ctx + " min_node").value_or(0.0);
      m.gpu = detail::optional<bool>(n, "gpu", ctx + " min_node").value_or(false);
      if (m.memory_gb < 0 || m.cpu_cores < 0 || m.disk_gb < 0) {
        throw Error(ErrorCode::SchemaError, ctx + ": node minimums must be >= 0");
      }
    }
    if (auto model = detail::optional<std::string>(f, "model", ctx)) {
      if (*model == "any" || *model == "Any") {
        req.functional.required_model = ModelRequirement::Any;
      } else if (auto parsed = parse_service_model(*model)) {
        req.functional.required_model = *parsed == ServiceModel::IaaS ? ModelRequirement::IaaS : ModelRequirement::PaaS;
      } else {
        throw Error(ErrorCode::SchemaError, ctx + ": unknown model '" + *model + "'");
      }
    }
  }

  if (auto it = j.find("qos_requested"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw Error(ErrorCode::SchemaError, "qos_requested must be an object");
    for (const auto& [attr, spec] : it->items()) {
      if (hierarchy.find_sub(attr) == nullptr) {
        throw Error(ErrorCode::UnknownAttribute, "requested value for unknown attribute '" + attr + "'");
      }
      const std::string ctx = "qos_requested '" + attr + "'";
      RequestedValue rv;
      if (auto v = detail::optional<double>(spec, "value", ctx)) {
        rv.value = *v;
      } else if (auto b = detail::optional<double>(spec, "bound", ctx)) {
        rv.value = *b;
        const auto dir = detail::require<std::string>(spec, "direction", ctx);
        if (dir == "lt") rv.bound = BoundDirection::LessThan;
        else if (dir == "gt") rv.bound = BoundDirection::GreaterThan;
        else throw Error(ErrorCode::SchemaError, ctx + ": direction must be 'lt' or 'gt'");
      } else {
        throw Error(ErrorCode::SchemaError, ctx + ": expected 'value' or 'bound'");
      }
      req.requested_qos.emplace(attr, rv);
    }
  }

  if (auto it = j.find("weights"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw Error(ErrorCode::SchemaError, "weights must be an object");
    for (const auto& [node, w] : it->items()) {
      if (!w.is_number()) throw Error(ErrorCode::SchemaError, "weight override for '" + node + "' must be a number");
      req.weight_overrides.emplace(node, w.get<double>());
    }
    // Validates names, ranges and that the rebalance is feasible.
    (void)apply_weight_overrides(hierarchy, req.weight_overrides);
  }
  return req;
}

json requirements_to_json(const RequirementSet& req) {
  const auto& f = req.functional;
  json software = json::array();
  for (const auto& sw : f.required_software) software.push_back({{"name", sw.name}, {"version", sw.version}});
  const char* model = f.required_model == ModelRequirement::Any    ? "any"
                      : f.required_model == ModelRequirement::IaaS ? "IaaS"
                                                                   : "PaaS";
  json qos = json::object();
  for (const auto& [attr, rv] : req.requested_qos) {
    if (rv.is_target()) {
      qos[attr] = {{"value", rv.value}};
    } else {
      qos[attr] = {{"bound", rv.value}, {"direction", *rv.bound == BoundDirection::LessThan ? "lt" : "gt"}};
    }
  }
  json weights = json::object();
  for (const auto& [node, w] : req.weight_overrides) weights[node] = w;
  return json{{"functional",
               {{"software", std::move(software)},
                {"engines", f.required_engines},
                {"min_node",
                 {{"memory_gb", f.min_node.memory_gb},
                  {"cpu_cores", f.min_node.cpu_cores},
                  {"disk_gb", f.min_node.disk_gb},
                  {"gpu", f.min_node.gpu}}},
                {"model", model}}},
              {"qos_requested", std::move(qos)},
              {"weights", std::move(weights)}};
}

RequirementSet load_requirements(const std::filesystem::path& path, const QoSHierarchy& hierarchy) {
  return requirements_from_json(read_json_file(path), hierarchy);
}

}  // namespace rankfarm
