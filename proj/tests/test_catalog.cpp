#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rankfarm/catalog.hpp"
#include "test_support.hpp"

using namespace rankfarm;
using nlohmann::json;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::IoError;
}

double sibling_sum(const std::vector<double>& ws) {
  double s = 0;
  for (double w : ws) s += w;
  return s;
}

json single_node(double group_weight, double attr_weight, const char* tendency = "positive") {
  return json::parse(R"({"groups":[{"id":"G","weight":)" + std::to_string(group_weight) +
                     R"(,"attributes":[{"name":"T","weight":1.0,"sub":[{"name":"A","weight":)" +
                     std::to_string(attr_weight) + R"(,"unit":"u","tendency":")" + tendency + R"("}]}]}]})");
}

}  // namespace

TEST_CASE("golden hierarchy loads with the published group and top-level weights") {
  const auto load = load_hierarchy(testing::data("hierarchy.json"));
  const auto& h = load.hierarchy;
  REQUIRE(h.groups.size() == 2);
  CHECK(h.groups[0].id == "Q_O");
  CHECK(h.groups[0].weight == 0.4);
  CHECK(h.groups[1].id == "Q_R");
  CHECK(h.groups[1].weight == 0.6);
  CHECK(h.groups[0].attributes[0].name == "Accountability");
  CHECK(h.groups[0].attributes[0].weight == 0.3);
  CHECK(h.groups[0].attributes[1].weight == 0.7);
  CHECK(h.groups[1].attributes[0].weight == 0.3);
  CHECK(h.groups[1].attributes[1].weight == 0.4);
  CHECK(h.groups[1].attributes[2].weight == 0.3);
  CHECK(h.sub_attributes().size() == 7);
  CHECK(h.find_sub("UploadTime")->parent == "Assurance");
  CHECK(h.find_sub("UploadTime")->tendency == Tendency::Negative);

  SUBCASE("sole cost child renormalized to 1 with a warning") {
    CHECK(h.find_sub("NodeCost")->weight == 1.0);
    REQUIRE(load.warnings.size() == 1);
    CHECK(load.warnings[0].find("Cost") != std::string::npos);
  }
  SUBCASE("every sibling set sums to one") {
    std::vector<double> groups;
    for (const auto& g : h.groups) {
      groups.push_back(g.weight);
      std::vector<double> tops;
      for (const auto& t : g.attributes) {
        tops.push_back(t.weight);
        std::vector<double> subs;
        for (const auto& s : t.sub) subs.push_back(s.weight);
        CHECK(std::abs(sibling_sum(subs) - 1.0) <= 1e-9);
      }
      CHECK(std::abs(sibling_sum(tops) - 1.0) <= 1e-9);
    }
    CHECK(std::abs(sibling_sum(groups) - 1.0) <= 1e-9);
  }
}

TEST_CASE("degenerate single-node hierarchy") {
  const auto load = hierarchy_from_json(single_node(1.0, 1.0));
  CHECK(load.warnings.empty());
  CHECK(load.hierarchy.groups[0].weight == 1.0);
  CHECK(load.hierarchy.find_sub("A")->weight == 1.0);
}

TEST_CASE("strict mode rejects weights that lenient mode renormalizes") {
  CHECK(code_of([] { load_hierarchy(testing::data("hierarchy.json"), {.strict = true}); }) == ErrorCode::WeightError);

  auto j = json::parse(testing::read_file(testing::data("hierarchy.json")));
  j["groups"][0]["weight"] = 0.5;
  j["groups"][1]["weight"] = 0.6;
  CHECK(code_of([&] { hierarchy_from_json(j, {.strict = true}); }) == ErrorCode::WeightError);
  const auto lenient = hierarchy_from_json(j);
  CHECK(lenient.hierarchy.groups[0].weight == doctest::Approx(0.5 / 1.1));
}

TEST_CASE("hierarchy schema errors") {
  CHECK(code_of([] { hierarchy_from_json(single_node(1.0, 1.0, "sideways")); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { hierarchy_from_json(json::parse(R"({"groups":[]})")); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { hierarchy_from_json(json::parse(R"({"levels":[]})")); }) == ErrorCode::SchemaError);
  CHECK(code_of([] { hierarchy_from_json(single_node(1.0, 0.0)); }) == ErrorCode::WeightError);
  CHECK(code_of([] { hierarchy_from_json(single_node(1.5, 1.0)); }) == ErrorCode::WeightError);

  auto fuzzy = single_node(1.0, 1.0);
  fuzzy["groups"][0]["attributes"][0]["sub"][0]["value_type"] = "fuzzy";
  CHECK(code_of([&] { hierarchy_from_json(fuzzy); }) == ErrorCode::SchemaError);

  auto dup = single_node(1.0, 1.0);
  dup["groups"][0]["attributes"][0]["sub"][0]["name"] = "T";
  CHECK(code_of([&] { hierarchy_from_json(dup); }) == ErrorCode::SchemaError);

  testing::TempDir dir;
  testing::write_file(dir / "bad.json", "{\"groups\": [");
  CHECK(code_of([&] { load_hierarchy(dir / "bad.json"); }) == ErrorCode::ParseError);
  CHECK(code_of([&] { load_hierarchy(dir / "missing.json"); }) == ErrorCode::IoError);
}

TEST_CASE("golden offerings") {
  const auto h = load_hierarchy(testing::data("hierarchy.json")).hierarchy;
  const Catalog c = load_offerings(testing::data("offerings.json"), h);
  REQUIRE(c.offerings.size() == 5);
  CHECK(c.find("RF3")->qos_values.at("NodeCost") == 0.08);
  CHECK(c.find("RF3")->qos_values.at("UploadTime") == 19);
  CHECK(c.find("RF2")->service_model == ServiceModel::PaaS);
  CHECK(c.find("RF9") == nullptr);
}

TEST_CASE("offering validation errors") {
  const auto h = load_hierarchy(testing::data("hierarchy.json")).hierarchy;
  testing::TempDir dir;

  testing::write_file(dir / "empty.json", R"({"services": []})");
  CHECK(code_of([&] { load_offerings(dir / "empty.json", h); }) == ErrorCode::EmptyCatalog);

  auto j = json::parse(testing::read_file(testing::data("offerings.json")));
  auto zero = j;
  zero["services"][0]["qos"]["UploadTime"] = 0;
  testing::write_file(dir / "zero.json", zero.dump());
  CHECK(code_of([&] { load_offerings(dir / "zero.json", h); }) == ErrorCode::NonPositiveValue);

  auto unknown = j;
  unknown["services"][1]["qos"]["Latency"] = 3;
  testing::write_file(dir / "unknown.json", unknown.dump());
  CHECK(code_of([&] { load_offerings(dir / "unknown.json", h); }) == ErrorCode::UnknownAttribute);

  auto dup = j;
  dup["services"][1]["id"] = "RF1";
  testing::write_file(dir / "dup.json", dup.dump());
  CHECK(code_of([&] { load_offerings(dir / "dup.json", h); }) == ErrorCode::DuplicateService);

  auto bad_model = j;
  bad_model["services"][0]["model"] = "SaaS";
  CHECK(code_of([&] { offering_from_json(bad_model["services"][0], h); }) == ErrorCode::SchemaError);
}

TEST_CASE("save then load is the identity") {
  const auto h = load_hierarchy(testing::data("hierarchy.json")).hierarchy;
  const Catalog c = load_offerings(testing::data("offerings.json"), h);
  testing::TempDir dir;
  save_catalog(c, dir / "catalog.json");

  const auto saved = json::parse(testing::read_file(dir / "catalog.json"));
  CHECK(saved["services"].size() == 5);

  const Catalog again = load_offerings(dir / "catalog.json", h);
  CHECK(again.offerings == c.offerings);
  CHECK(again.hierarchy == c.hierarchy);

  SUBCASE("external edit to a negative value fails on reload") {
    auto edited = saved;
    edited["services"][2]["qos"]["SRT"] = -1;
    testing::write_file(dir / "catalog.json", edited.dump(2));
    CHECK(code_of([&] { load_offerings(dir / "catalog.json", h); }) == ErrorCode::NonPositiveValue);
  }
  SUBCASE("hierarchy round trip") {
    save_hierarchy(h, dir / "h.json");
    const auto reloaded = load_hierarchy(dir / "h.json", {.strict = true});
    CHECK(reloaded.hierarchy == h);
    CHECK(reloaded.warnings.empty());
  }
}

TEST_CASE("save to an unwritable location is an IoError") {
  const auto h = load_hierarchy(testing::data("hierarchy.json")).hierarchy;
  const Catalog c = load_offerings(testing::data("offerings.json"), h);
  CHECK(code_of([&] { save_catalog(c, "/nonexistent-dir/catalog.json"); }) == ErrorCode::IoError);
}
