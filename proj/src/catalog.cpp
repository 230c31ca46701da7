#include "rankfarm/catalog.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json_util.hpp"

namespace rankfarm {

using nlohmann::json;

namespace {

constexpr double kWeightTol = 1e-9;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

void check_weight(double w, const std::string& node) {
  if (!std::isfinite(w) || !(w > 0.0) || w > 1.0) {
    throw Error(ErrorCode::WeightError, "weight of '" + node + "' is " + detail::format_number(w) + ", expected (0, 1]");
  }
}

// Rescales the weights reached through `refs` so they sum to 1.
void normalize_siblings(const std::vector<double*>& refs, const std::string& parent, const LoadOptions& opts,
                        std::vector<std::string>& warnings) {
  double total = 0.0;
  for (double* w : refs) total += *w;
  if (std::abs(total - 1.0) <= kWeightTol) return;
  if (opts.strict) {
    throw Error(ErrorCode::WeightError, "weights under '" + parent + "' sum to " + detail::format_number(total));
  }
  for (double* w : refs) *w /= total;
  warnings.push_back("weights under '" + parent + "' summed to " + detail::format_number(total) + "; renormalized");
}

}  // namespace

std::string_view to_string(Tendency t) noexcept {
  switch (t) {
    case Tendency::Positive: return "positive";
    case Tendency::Negative: return "negative";
    case Tendency::Close: return "close";
    case Tendency::Exact: return "exact";
  }
  return "positive";
}

std::string_view to_string(ServiceModel m) noexcept { return m == ServiceModel::IaaS ? "IaaS" : "PaaS"; }

std::optional<Tendency> parse_tendency(std::string_view s) noexcept {
  const std::string l = lower(s);
  if (l == "positive") return Tendency::Positive;
  if (l == "negative") return Tendency::Negative;
  if (l == "close") return Tendency::Close;
  if (l == "exact") return Tendency::Exact;
  return std::nullopt;
}

std::optional<ServiceModel> parse_service_model(std::string_view s) noexcept {
  const std::string l = lower(s);
  if (l == "iaas") return ServiceModel::IaaS;
  if (l == "paas") return ServiceModel::PaaS;
  return std::nullopt;
}

const AttributeSpec* QoSHierarchy::find_sub(std::string_view name) const noexcept {
  for (const auto& g : groups)
    for (const auto& t : g.attributes)
      for (const auto& s : t.sub)
        if (s.name == name) return &s;
  return nullptr;
}

bool QoSHierarchy::contains(std::string_view node) const noexcept {
  for (const auto& g : groups) {
    if (g.id == node) return true;
    for (const auto& t : g.attributes) {
      if (t.name == node) return true;
      for (const auto& s : t.sub)
        if (s.name == node) return true;
    }
  }
  return false;
}

std::vector<const AttributeSpec*> QoSHierarchy::sub_attributes() const {
  std::vector<const AttributeSpec*> out;
  for (const auto& g : groups)
    for (const auto& t : g.attributes)
      for (const auto& s : t.sub) out.push_back(&s);
  return out;
}

std::vector<const TopLevelAttribute*> QoSHierarchy::top_attributes() const {
  std::vector<const TopLevelAttribute*> out;
  for (const auto& g : groups)
    for (const auto& t : g.attributes) out.push_back(&t);
  return out;
}

const ServiceOffering* Catalog::find(std::string_view service_id) const noexcept {
  for (const auto& o : offerings)
    if (o.service_id == service_id) return &o;
  return nullptr;
}

HierarchyLoad hierarchy_from_json(const json& j, const LoadOptions& opts) {
  HierarchyLoad out;
  auto& h = out.hierarchy;
  std::set<std::string> names;
  auto claim = [&](const std::string& name) {
    if (name.empty()) throw Error(ErrorCode::SchemaError, "hierarchy node with empty name");
    if (!names.insert(name).second) throw Error(ErrorCode::SchemaError, "duplicate hierarchy node '" + name + "'");
  };

  const json& groups = detail::require_array(j, "groups", "hierarchy");
  if (groups.empty()) throw Error(ErrorCode::SchemaError, "hierarchy has no groups");
  for (const json& gj : groups) {
    QoSGroup g;
    g.id = detail::require<std::string>(gj, "id", "group");
    claim(g.id);
    g.weight = detail::require<double>(gj, "weight", "group '" + g.id + "'");
    check_weight(g.weight, g.id);
    const json& attrs = detail::require_array(gj, "attributes", "group '" + g.id + "'");
    if (attrs.empty()) throw Error(ErrorCode::SchemaError, "group '" + g.id + "' has no attributes");
    for (const json& tj : attrs) {
      TopLevelAttribute t;
      t.name = detail::require<std::string>(tj, "name", "attribute in group '" + g.id + "'");
      claim(t.name);
      t.parent = g.id;
      t.weight = detail::require<double>(tj, "weight", "attribute '" + t.name + "'");
      check_weight(t.weight, t.name);
      const json& subs = detail::require_array(tj, "sub", "attribute '" + t.name + "'");
      if (subs.empty()) throw Error(ErrorCode::SchemaError, "attribute '" + t.name + "' has no sub-level attributes");
      for (const json& sj : subs) {
        AttributeSpec s;
        s.name = detail::require<std::string>(sj, "name", "sub-attribute of '" + t.name + "'");
        claim(s.name);
        s.parent = t.name;
        s.weight = detail::require<double>(sj, "weight", "sub-attribute '" + s.name + "'");
        check_weight(s.weight, s.name);
        s.unit = detail::require<std::string>(sj, "unit", "sub-attribute '" + s.name + "'");
        const auto tendency = detail::require<std::string>(sj, "tendency", "sub-attribute '" + s.name + "'");
        const auto parsed = parse_tendency(tendency);
        if (!parsed) throw Error(ErrorCode::SchemaError, "unknown tendency '" + tendency + "' on '" + s.name + "'");
        s.tendency = *parsed;
        if (sj.contains("value_type")) {
          const auto vt = detail::require<std::string>(sj, "value_type", "sub-attribute '" + s.name + "'");
          if (lower(vt) != "numeric") {
            throw Error(ErrorCode::SchemaError,
                        "value type '" + vt + "' on '" + s.name + "' is not supported (numeric only)");
          }
        }
        t.sub.push_back(std::move(s));
      }
      g.attributes.push_back(std::move(t));
    }
    h.groups.push_back(std::move(g));
  }

  std::vector<double*> group_weights;
  for (auto& g : h.groups) group_weights.push_back(&g.weight);
  normalize_siblings(group_weights, "groups", opts, out.warnings);
  for (auto& g : h.groups) {
    std::vector<double*> refs;
    for (auto& t : g.attributes) refs.push_back(&t.weight);
    normalize_siblings(refs, g.id, opts, out.warnings);
    for (auto& t : g.attributes) {
      std::vector<double*> sub_refs;
      for (auto& s : t.sub) sub_refs.push_back(&s.weight);
      normalize_siblings(sub_refs, t.name, opts, out.warnings);
    }
  }
  return out;
}

json hierarchy_to_json(const QoSHierarchy& h) {
  json groups = json::array();
  for (const auto& g : h.groups) {
    json attrs = json::array();
    for (const auto& t : g.attributes) {
      json subs = json::array();
      for (const auto& s : t.sub) {
        subs.push_back({{"name", s.name},
                        {"weight", s.weight},
                        {"unit", s.unit},
                        {"tendency", to_string(s.tendency)},
                        {"value_type", "numeric"}});
      }
      attrs.push_back({{"name", t.name}, {"weight", t.weight}, {"sub", std::move(subs)}});
    }
    groups.push_back({{"id", g.id}, {"weight", g.weight}, {"attributes", std::move(attrs)}});
  }
  return json{{"groups", std::move(groups)}};
}

void validate_offering(const ServiceOffering& o, const QoSHierarchy& h) {
  if (o.service_id.empty()) throw Error(ErrorCode::SchemaError, "service with empty id");
  for (const auto& [attr, value] : o.qos_values) {
    const AttributeSpec* spec = h.find_sub(attr);
    if (spec == nullptr) {
      throw Error(ErrorCode::UnknownAttribute,
                  "service '" + o.service_id + "' reports '" + attr + "', which is not a sub-level attribute");
    }
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::SchemaError, "service '" + o.service_id + "' has a non-finite value for '" + attr + "'");
    }
    const bool ratio = spec->tendency == Tendency::Positive || spec->tendency == Tendency::Negative;
    if (ratio && !(value > 0.0)) {
      throw Error(ErrorCode::NonPositiveValue, "service '" + o.service_id + "' has " + attr + " = " +
                                                   detail::format_number(value) + " (must be > 0)");
    }
  }
  if (o.node_config.memory_gb < 0 || o.node_config.cpu_cores < 0 || o.node_config.disk_gb < 0) {
    throw Error(ErrorCode::SchemaError, "service '" + o.service_id + "' has a negative node configuration");
  }
}

ServiceOffering offering_from_json(const json& j, const QoSHierarchy& h) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "service record must be an object");
  ServiceOffering o;
  o.service_id = detail::require<std::string>(j, "id", "service");
  const std::string ctx = "service '" + o.service_id + "'";
  const auto model = detail::require<std::string>(j, "model", ctx);
  const auto parsed = parse_service_model(model);
  if (!parsed) throw Error(ErrorCode::SchemaError, ctx + " has unknown model '" + model + "'");
  o.service_model = *parsed;

  if (j.contains("software")) {
    for (const json& sw : detail::require_array(j, "software", ctx)) {
      o.software_versions.push_back({detail::require<std::string>(sw, "name", ctx + " software"),
                                     detail::require<std::string>(sw, "version", ctx + " software")});
    }
  }
  if (j.contains("engines")) {
    for (const json& e : detail::require_array(j, "engines", ctx)) {
      if (!e.is_string()) throw Error(ErrorCode::SchemaError, ctx + " engines must be strings");
      o.render_engines.push_back(e.get<std::string>());
    }
  }
  if (j.contains("node")) {
    const json& n = j.at("node");
    if (!n.is_object()) throw Error(ErrorCode::SchemaError, ctx + " node must be an object");
    o.node_config.memory_gb = detail::optional<double>(n, "memory_gb", ctx + " node").value_or(0.0);
    o.node_config.cpu_cores = detail::optional<int>(n, "cpu_cores", ctx + " node").value_or(0);
    o.node_config.disk_gb = detail::optional<double>(n, "disk_gb", ctx + " node").value_or(0.0);
    o.node_config.gpu = detail::optional<bool>(n, "gpu", ctx + " node").value_or(false);
  }
  const json& qos = detail::require_object(j, "qos", ctx);
  for (const auto& [attr, value] : qos.items()) {
    if (!value.is_number()) throw Error(ErrorCode::SchemaError, ctx + " qos '" + attr + "' must be a number");
    o.qos_values[attr] = value.get<double>();
  }
  validate_offering(o, h);
  return o;
}

json offering_to_json(const ServiceOffering& o) {
  json software = json::array();
  for (const auto& sw : o.software_versions) software.push_back({{"name", sw.name}, {"version", sw.version}});
  json qos = json::object();
  for (const auto& [attr, value] : o.qos_values) qos[attr] = value;
  return json{{"id", o.service_id},
              {"model", to_string(o.service_model)},
              {"software", std::move(software)},
              {"engines", o.render_engines},
              {"node",
               {{"memory_gb", o.node_config.memory_gb},
                {"cpu_cores", o.node_config.cpu_cores},
                {"disk_gb", o.node_config.disk_gb},
                {"gpu", o.node_config.gpu}}},
              {"qos", std::move(qos)}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to '" + path.string() + "' failed");
}

HierarchyLoad load_hierarchy(const std::filesystem::path& path, const LoadOptions& opts) {
  return hierarchy_from_json(read_json_file(path), opts);
}

Catalog load_offerings(const std::filesystem::path& path, const QoSHierarchy& hierarchy) {
  const json j = read_json_file(path);
  Catalog catalog;
  catalog.hierarchy = hierarchy;
  catalog.source_path = path;
  std::set<std::string> seen;
  for (const json& sj : detail::require_array(j, "services", "offerings file")) {
    ServiceOffering o = offering_from_json(sj, hierarchy);
    if (!seen.insert(o.service_id).second) {
      throw Error(ErrorCode::DuplicateService, "service '" + o.service_id + "' appears more than once");
    }
    catalog.offerings.push_back(std::move(o));
  }
  if (catalog.offerings.empty()) throw Error(ErrorCode::EmptyCatalog, path.string() + " lists no services");
  return catalog;
}

void save_catalog(const Catalog& catalog, const std::filesystem::path& path) {
  json services = json::array();
  for (const auto& o : catalog.offerings) services.push_back(offering_to_json(o));
  write_text_file(path, json{{"services", std::move(services)}}.dump(2) + "\n");
}

void save_hierarchy(const QoSHierarchy& hierarchy, const std::filesystem::path& path) {
  write_text_file(path, hierarchy_to_json(hierarchy).dump(2) + "\n");
}

}  // namespace rankfarm
