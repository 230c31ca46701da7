#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include "rankfarm/broker.hpp"
#include "rankfarm/report.hpp"
#include "test_support.hpp"

// After the Eigen-based headers.
#include <httplib.h>

using namespace rankfarm;
using nlohmann::json;

namespace {

json golden_services() { return json::parse(testing::read_file(testing::data("offerings.json")))["services"]; }
std::string hierarchy_body() { return testing::read_file(testing::data("hierarchy.json")); }
json injection() { return json::parse(testing::read_file(testing::data("reference_vectors.json"))); }

void register_golden(Broker& b) {
  REQUIRE(b.put_hierarchy(hierarchy_body()).status == 200);
  for (const auto& s : golden_services()) REQUIRE(b.put_offering(s["id"].get<std::string>(), s.dump()).status == 200);
}

std::string error_of(const Response& r) { return json::parse(r.body).value("error", ""); }

}  // namespace

TEST_CASE("put_offering") {
  const auto h = load_hierarchy(testing::data("hierarchy.json")).hierarchy;
  Broker b(std::nullopt, h);
  const auto rf2 = golden_services()[1];

  const auto first = b.put_offering("RF2", rf2.dump());
  CHECK(first.status == 200);
  CHECK(json::parse(first.body)["revision"] == 1);

  SUBCASE("same body twice: same content, new revision") {
    const auto before = b.state()->offerings;
    const auto again = b.put_offering("RF2", rf2.dump());
    CHECK(again.status == 200);
    CHECK(json::parse(again.body)["revision"] == 2);
    CHECK(b.state()->offerings == before);
  }
  SUBCASE("non-positive value") {
    auto bad = rf2;
    bad["qos"]["SRT"] = 0;
    const auto r = b.put_offering("RF2", bad.dump());
    CHECK(r.status == 400);
    CHECK(error_of(r) == "NonPositiveValue");
    CHECK(b.revision() == 1);
  }
  SUBCASE("other validation failures") {
    auto unknown = rf2;
    unknown["qos"]["Latency"] = 1;
    CHECK(b.put_offering("RF2", unknown.dump()).status == 400);
    CHECK(b.put_offering("RF9", rf2.dump()).status == 400);
    CHECK(error_of(b.put_offering("RF2", "{not json")) == "ParseError");
  }
}

TEST_CASE("offerings need a hierarchy") {
  Broker b;
  const auto r = b.put_offering("RF2", golden_services()[1].dump());
  CHECK(r.status == 409);
  CHECK(error_of(r) == "NoHierarchy");
  CHECK(b.post_rank("{}").status == 409);
  CHECK(b.put_hierarchy(hierarchy_body()).status == 200);
  CHECK(b.revision() == 1);
  CHECK(b.put_hierarchy(R"({"groups":[]})").status == 400);
}

TEST_CASE("post_rank") {
  Broker b;
  register_golden(b);
  const auto rev = b.revision();

  SUBCASE("published vectors: best is RF2") {
    const auto r = b.post_rank(json{{"inject", injection()}}.dump());
    REQUIRE(r.status == 200);
    const auto j = json::parse(r.body);
    CHECK(j["best"] == "RF2");
    CHECK(j["matched"].size() == 5);
    CHECK(j["report"]["choices"][0]["label"] == "First Choice");
  }
  SUBCASE("computed vectors: best is RF3") {
    const auto r = b.post_rank(testing::read_file(testing::data("requirements.json")));
    REQUIRE(r.status == 200);
    CHECK(json::parse(r.body)["best"] == "RF3");
  }
  SUBCASE("no match") {
    const auto r = b.post_rank(R"({"functional":{"min_node":{"memory_gb":1024}}})");
    CHECK(r.status == 422);
    CHECK(error_of(r) == "EmptyMatch");
  }
  SUBCASE("functional filter narrows the ranking") {
    const auto r = b.post_rank(R"({"functional":{"engines":["V-Ray"]}})");
    const auto j = json::parse(r.body);
    CHECK(j["matched"] == json::array({"RF2", "RF4"}));
    CHECK(j["rejected"].size() == 3);
    CHECK(j["rejected"][0]["reason"] == "ENGINE");
  }
  SUBCASE("bad requests") {
    CHECK(b.post_rank(R"({"weights":{"Q_O":2}})").status == 400);
    CHECK(b.post_rank("[").status == 400);
  }
  CHECK(b.revision() == rev);
}

TEST_CASE("single-service registry") {
  const auto h = load_hierarchy(testing::data("hierarchy.json")).hierarchy;
  Broker b(std::nullopt, h);
  CHECK(b.post_rank("{}").status == 422);
  b.put_offering("RF5", golden_services()[4].dump());
  const auto j = json::parse(b.post_rank("{}").body);
  CHECK(j["best"] == "RF5");
  CHECK(j["report"]["final"][0] == 1.0);
}

TEST_CASE("reports") {
  Broker b;
  register_golden(b);
  CHECK(b.get_report("rpt-0000000000000000").status == 404);

  const std::string body = json{{"inject", injection()}}.dump();
  const auto first = b.post_rank(body);
  const auto replay = b.post_rank(body);
  CHECK(first.body == replay.body);

  const auto j = json::parse(first.body);
  const std::string id = j["report_id"];
  const auto stored = b.get_report(id);
  CHECK(stored.status == 200);
  CHECK(json::parse(stored.body) == j["report"]);
  CHECK(stored.body == j["report"].dump());

  const auto other = json::parse(b.post_rank("{}").body);
  CHECK(other["report_id"] != j["report_id"]);

  b.put_offering("RF1", golden_services()[0].dump());
  const auto after = json::parse(b.post_rank(body).body);
  CHECK(after["report_id"] != j["report_id"]);
  CHECK(b.get_report(id).body == stored.body);
}

TEST_CASE("snapshot save and load") {
  testing::TempDir dir;
  const auto path = dir / "registry.json";
  std::string rank_body;
  {
    Broker b(path);
    register_golden(b);
    rank_body = b.post_rank("{}").body;
    b.save_snapshot();
  }
  Broker reloaded(path);
  CHECK(reloaded.revision() == 6);
  CHECK(reloaded.state()->offerings.size() == 5);
  CHECK(reloaded.post_rank("{}").body == rank_body);

  Broker fresh(dir / "absent.json");
  CHECK(fresh.revision() == 0);
  CHECK(!fresh.state()->hierarchy);
}

TEST_CASE("concurrent readers and a writer") {
  Broker b;
  register_golden(b);
  std::atomic<int> bad{0};
  std::vector<std::thread> readers;
  for (int t = 0; t < 4; ++t) {
    readers.emplace_back([&] {
      for (int i = 0; i < 20; ++i) {
        const auto r = b.post_rank("{}");
        const auto j = json::parse(r.body);
        if (r.status != 200 || j["matched"].size() != 5) ++bad;
      }
    });
  }
  for (int i = 0; i < 20; ++i) b.put_offering("RF1", golden_services()[0].dump());
  for (auto& t : readers) t.join();
  CHECK(bad == 0);
  CHECK(b.revision() == 26);
}

TEST_CASE("http routes over loopback") {
  Broker b;
  httplib::Server server;
  mount(b, server);
  const int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread listener([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/v1/healthz");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(json::parse(health->body)["hierarchy"] == false);

  auto early = client.Put("/v1/offerings/RF1", golden_services()[0].dump(), "application/json");
  REQUIRE(early);
  CHECK(early->status == 409);

  auto h = client.Put("/v1/hierarchy", hierarchy_body(), "application/json");
  REQUIRE(h);
  CHECK(h->status == 200);
  for (const auto& s : golden_services()) {
    auto r = client.Put("/v1/offerings/" + s["id"].get<std::string>(), s.dump(), "application/json");
    REQUIRE(r);
    CHECK(r->status == 200);
  }
  auto rank = client.Post("/v1/rank", json{{"inject", injection()}}.dump(), "application/json");
  REQUIRE(rank);
  CHECK(rank->status == 200);
  const auto j = json::parse(rank->body);
  CHECK(j["best"] == "RF2");
  CHECK(rank->body == b.post_rank(json{{"inject", injection()}}.dump()).body);

  auto report = client.Get("/v1/reports/" + j["report_id"].get<std::string>());
  REQUIRE(report);
  CHECK(report->status == 200);
  CHECK(json::parse(report->body) == j["report"]);
  auto missing = client.Get("/v1/reports/nope");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  auto none = client.Post("/v1/rank", R"({"functional":{"model":"IaaS","engines":["V-Ray"]}})", "application/json");
  REQUIRE(none);
  CHECK(none->status == 422);

  server.stop();
  listener.join();
}
