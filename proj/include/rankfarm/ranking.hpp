#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "rankfarm/ahp.hpp"
#include "rankfarm/catalog.hpp"
#include "rankfarm/requirements.hpp"

namespace rankfarm {

/// One relative ranking vector, aligned with RankingReport::services.
struct RankingVector {
  std::string name;
  Eigen::VectorXd values;
};

struct Choice {
  int rank = 0;
  std::string service_id;
  double value = 0.0;
  std::string label;
};

struct RankingReport {
  std::vector<std::string> services;
  std::vector<RankingVector> sub_level;  // hierarchy order
  std::vector<RankingVector> top_level;  // hierarchy order
  std::vector<RankingVector> groups;     // hierarchy order
  Eigen::VectorXd final;
  std::vector<Choice> choices;  // best first
  std::vector<std::string> warnings;

  const RankingVector* find_sub(std::string_view name) const noexcept;
  const RankingVector* find_top(std::string_view name) const noexcept;
  const RankingVector* find_group(std::string_view name) const noexcept;
  /// Final value of one service; throws SchemaError for unknown ids.
  double final_value(std::string_view service_id) const;
};

/// Per-attribute, per-service values that replace the computed sub-level
/// vector for that attribute. Used to feed externally published vectors
/// through the aggregation tiers unchanged.
using InjectedVectors = std::map<std::string, std::map<std::string, double>>;

InjectedVectors injection_from_json(const nlohmann::json& j, const QoSHierarchy& hierarchy);
InjectedVectors load_injection(const std::filesystem::path& path, const QoSHierarchy& hierarchy);

struct RankOptions {
  PowerIterationOptions<double> power;
  Smoothing<double> smoothing;
  InjectedVectors injected;
};

/// "First Choice", "Second Choice", ...; numeric ordinals past twenty.
std::string ordinal_label(int rank);

/// Weighted combination of the group vectors, matched by name. A zero
/// weight drops that group; the rest must still sum to 1.
Eigen::VectorXd final_rank(std::span<const RankingVector> group_vectors,
                           const std::map<std::string, double>& group_weights);

/// Ranks the matched services over the full hierarchy: one pairwise matrix
/// and eigenvector per sub-level attribute, weighted roll-up to top-level
/// attributes and groups, then the final vector sorted into choices.
/// Ties (equal final values) are ordered by service id and reported.
RankingReport ahp_rank(const Catalog& catalog, std::span<const std::string> matched, const RequirementSet& req,
                       const RankOptions& opts = {});

const std::string& select_best(const RankingReport& report);

}  // namespace rankfarm
