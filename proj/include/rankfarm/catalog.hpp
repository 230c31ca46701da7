#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rankfarm/ahp.hpp"

namespace rankfarm {

enum class ValueType { Numeric };
enum class ServiceModel { IaaS, PaaS };

std::string_view to_string(Tendency t) noexcept;
std::string_view to_string(ServiceModel m) noexcept;
std::optional<Tendency> parse_tendency(std::string_view s) noexcept;
std::optional<ServiceModel> parse_service_model(std::string_view s) noexcept;

/// A leaf of the QoS hierarchy: the only level that carries measured values.
struct AttributeSpec {
  std::string name;
  std::string unit;
  ValueType value_type = ValueType::Numeric;
  Tendency tendency = Tendency::Positive;
  double weight = 1.0;
  std::string parent;

  bool operator==(const AttributeSpec&) const = default;
};

struct TopLevelAttribute {
  std::string name;
  double weight = 1.0;
  std::string parent;
  std::vector<AttributeSpec> sub;

  bool operator==(const TopLevelAttribute&) const = default;
};

struct QoSGroup {
  std::string id;
  double weight = 1.0;
  std::vector<TopLevelAttribute> attributes;

  bool operator==(const QoSGroup&) const = default;
};

/// Groups -> top-level attributes -> sub-level attributes. Sibling weights
/// under every parent (and across groups) sum to 1 once loaded.
struct QoSHierarchy {
  std::vector<QoSGroup> groups;

  const AttributeSpec* find_sub(std::string_view name) const noexcept;
  bool contains(std::string_view node) const noexcept;
  /// Sub-level attributes in declaration order.
  std::vector<const AttributeSpec*> sub_attributes() const;
  /// Top-level attributes in declaration order.
  std::vector<const TopLevelAttribute*> top_attributes() const;

  bool operator==(const QoSHierarchy&) const = default;
};

struct SoftwareVersion {
  std::string name;
  std::string version;

  auto operator<=>(const SoftwareVersion&) const = default;
};

struct NodeConfig {
  double memory_gb = 0.0;
  int cpu_cores = 0;
  double disk_gb = 0.0;
  bool gpu = false;

  bool operator==(const NodeConfig&) const = default;
};

struct ServiceOffering {
  std::string service_id;
  ServiceModel service_model = ServiceModel::PaaS;
  std::vector<SoftwareVersion> software_versions;
  std::vector<std::string> render_engines;
  NodeConfig node_config;
  std::map<std::string, double> qos_values;

  bool operator==(const ServiceOffering&) const = default;
};

struct Catalog {
  std::vector<ServiceOffering> offerings;
  QoSHierarchy hierarchy;
  std::filesystem::path source_path;

  const ServiceOffering* find(std::string_view service_id) const noexcept;
};

struct LoadOptions {
  /// Reject sibling weights that do not sum to 1 instead of renormalizing.
  bool strict = false;
};

struct HierarchyLoad {
  QoSHierarchy hierarchy;
  std::vector<std::string> warnings;
};

// Parsing from already-decoded JSON. These are the primitives the file
// loaders and the broker share.
HierarchyLoad hierarchy_from_json(const nlohmann::json& j, const LoadOptions& opts = {});
nlohmann::json hierarchy_to_json(const QoSHierarchy& h);
ServiceOffering offering_from_json(const nlohmann::json& j, const QoSHierarchy& h);
nlohmann::json offering_to_json(const ServiceOffering& o);
/// Checks the offering against the hierarchy; throws on the first violation.
void validate_offering(const ServiceOffering& o, const QoSHierarchy& h);

HierarchyLoad load_hierarchy(const std::filesystem::path& path, const LoadOptions& opts = {});
Catalog load_offerings(const std::filesystem::path& path, const QoSHierarchy& hierarchy);
void save_catalog(const Catalog& catalog, const std::filesystem::path& path);
void save_hierarchy(const QoSHierarchy& hierarchy, const std::filesystem::path& path);

/// Reads and parses a UTF-8 JSON file, mapping failures onto IoError and
/// ParseError.
nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace rankfarm
