#pragma once

#include <string>
#include <vector>

#include "rankfarm/catalog.hpp"
#include "rankfarm/requirements.hpp"

namespace rankfarm {

/// Checks run in this order; the first failing one names the rejection.
enum class RejectReason { Software, Engine, NodeConfig, Model };

std::string_view to_string(RejectReason r) noexcept;

struct Rejection {
  std::string service_id;
  RejectReason reason;
  std::string detail;
};

struct MatchResult {
  std::vector<std::string> matched;  // catalog order
  std::vector<Rejection> rejected;
};

/// Functional filtering ahead of any scoring. A service matches when it
/// offers every required (software, version) pair and render engine, its
/// node meets each minimum, and its model is acceptable. Names and versions
/// compare after trimming and case-folding.
MatchResult fn_match(const Catalog& catalog, const FunctionalRequirements& req);

}  // namespace rankfarm
