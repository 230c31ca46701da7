#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "generators.hpp"
#include "rankfarm/matcher.hpp"
#include "test_support.hpp"

using namespace rankfarm;

namespace {

Catalog golden() {
  const auto h = load_hierarchy(testing::data("hierarchy.json")).hierarchy;
  return load_offerings(testing::data("offerings.json"), h);
}

// Direct restatement of the matching predicate, with exact string equality
// (the generators only emit canonical spellings).
bool oracle_matches(const ServiceOffering& o, const FunctionalRequirements& r) {
  for (const auto& sw : r.required_software)
    if (std::find(o.software_versions.begin(), o.software_versions.end(), sw) == o.software_versions.end()) return false;
  for (const auto& e : r.required_engines)
    if (std::find(o.render_engines.begin(), o.render_engines.end(), e) == o.render_engines.end()) return false;
  if (o.node_config.memory_gb < r.min_node.memory_gb) return false;
  if (o.node_config.cpu_cores < r.min_node.cpu_cores) return false;
  if (o.node_config.disk_gb < r.min_node.disk_gb) return false;
  if (r.min_node.gpu && !o.node_config.gpu) return false;
  if (r.required_model == ModelRequirement::IaaS && o.service_model != ServiceModel::IaaS) return false;
  if (r.required_model == ModelRequirement::PaaS && o.service_model != ServiceModel::PaaS) return false;
  return true;
}

void check_partition(const Catalog& c, const MatchResult& m) {
  std::set<std::string> seen;
  for (const auto& id : m.matched) CHECK(seen.insert(id).second);
  for (const auto& r : m.rejected) CHECK(seen.insert(r.service_id).second);
  CHECK(seen.size() == c.offerings.size());
  // matched keeps catalog order
  std::vector<std::string> order;
  for (const auto& o : c.offerings)
    if (std::find(m.matched.begin(), m.matched.end(), o.service_id) != m.matched.end()) order.push_back(o.service_id);
  CHECK(order == m.matched);
}

}  // namespace

TEST_CASE("empty requirements match every service") {
  const Catalog c = golden();
  const auto m = fn_match(c, {});
  CHECK(m.matched == std::vector<std::string>{"RF1", "RF2", "RF3", "RF4", "RF5"});
  CHECK(m.rejected.empty());
}

TEST_CASE("engine requirement selects the V-Ray services") {
  const Catalog c = golden();
  FunctionalRequirements req;
  req.required_engines = {"V-Ray"};
  const auto m = fn_match(c, req);
  std::vector<std::string> expected;
  for (const auto& o : c.offerings)
    if (oracle_matches(o, req)) expected.push_back(o.service_id);
  CHECK(expected == std::vector<std::string>{"RF2", "RF4"});
  CHECK(m.matched == expected);
  for (const auto& r : m.rejected) CHECK(r.reason == RejectReason::Engine);
}

TEST_CASE("memory minimum above every node rejects all with NODE_CONFIG") {
  const Catalog c = golden();
  FunctionalRequirements req;
  req.min_node.memory_gb = 64;
  const auto m = fn_match(c, req);
  CHECK(m.matched.empty());
  REQUIRE(m.rejected.size() == 5);
  for (const auto& r : m.rejected) CHECK(to_string(r.reason) == "NODE_CONFIG");
}

TEST_CASE("reason codes follow the check order") {
  const Catalog c = golden();
  FunctionalRequirements req;
  req.required_software = {{"Houdini", "13"}};
  req.required_engines = {"Arnold"};
  req.required_model = ModelRequirement::IaaS;
  for (const auto& r : fn_match(c, req).rejected) CHECK(r.reason == RejectReason::Software);

  FunctionalRequirements model_only;
  model_only.required_model = ModelRequirement::IaaS;
  const auto m = fn_match(c, model_only);
  CHECK(m.matched == std::vector<std::string>{"RF3", "RF5"});
  for (const auto& r : m.rejected) CHECK(r.reason == RejectReason::Model);

  FunctionalRequirements gpu;
  gpu.min_node.gpu = true;
  CHECK(fn_match(c, gpu).matched == std::vector<std::string>{"RF2", "RF4"});
}

TEST_CASE("software and engines compare after trimming and case folding") {
  const Catalog c = golden();
  FunctionalRequirements req;
  req.required_software = {{"  maya ", "7.0"}};
  req.required_engines = {"mental ray"};
  CHECK(fn_match(c, req).matched == std::vector<std::string>{"RF1", "RF2", "RF3"});
  req.required_software = {{"Maya", "7"}};
  CHECK(fn_match(c, req).matched.empty());
}

TEST_CASE("property: agrees with the predicate oracle; constraints only shrink the match") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 200; ++trial) {
    const Catalog c = testing::random_catalog(rng, 1 + static_cast<int>(rng() % 12));
    FunctionalRequirements req;
    auto previous = fn_match(c, req);
    CHECK(previous.matched.size() == c.offerings.size());
    for (int step = 0; step < 6; ++step) {
      req = testing::tighten(rng, req);
      const auto next = fn_match(c, req);
      check_partition(c, next);
      for (const auto& id : next.matched) {
        CHECK(std::find(previous.matched.begin(), previous.matched.end(), id) != previous.matched.end());
      }
      for (const auto& o : c.offerings) {
        const bool matched = std::find(next.matched.begin(), next.matched.end(), o.service_id) != next.matched.end();
        CHECK(matched == oracle_matches(o, req));
      }
      previous = next;
    }
  }
}
