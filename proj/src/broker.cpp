#include "rankfarm/broker.hpp"

#include <cstdio>

#include "json_util.hpp"
#include "rankfarm/matcher.hpp"
#include "rankfarm/ranking.hpp"
#include "rankfarm/report.hpp"
#include "rankfarm/requirements.hpp"

namespace rankfarm {

using nlohmann::json;

namespace {

int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::SchemaError:
    case ErrorCode::WeightError:
    case ErrorCode::UnknownAttribute:
    case ErrorCode::NonPositiveValue:
    case ErrorCode::DuplicateService:
    case ErrorCode::MissingVReq:
      return 400;
    case ErrorCode::NoHierarchy:
      return 409;
    case ErrorCode::EmptyMatch:
    case ErrorCode::MissingQoSValue:
    case ErrorCode::EmptyCatalog:
      return 422;
    default:
      return 500;
  }
}

Response error_response(const Error& e) {
  return {http_status(e.code()), json{{"error", to_string(e.code())}, {"detail", e.detail()}}.dump()};
}

json parse_body(std::string_view body) {
  try {
    return json::parse(body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json snapshot_json(const Broker::State& s) {
  json services = json::array();
  for (const auto& [id, o] : s.offerings) services.push_back(offering_to_json(o));
  json j{{"revision", s.revision}, {"services", std::move(services)}};
  j["hierarchy"] = s.hierarchy ? hierarchy_to_json(*s.hierarchy) : json(nullptr);
  return j;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

Broker::Broker(std::optional<std::filesystem::path> snapshot, std::optional<QoSHierarchy> hierarchy)
    : snapshot_path_(std::move(snapshot)) {
  auto initial = std::make_shared<State>();
  initial->hierarchy = std::move(hierarchy);
  state_ = initial;
  if (!snapshot_path_ || !std::filesystem::exists(*snapshot_path_)) return;
  const json j = read_json_file(*snapshot_path_);
  auto s = std::make_shared<State>();
  s->revision = detail::require<std::uint64_t>(j, "revision", "snapshot");
  if (j.contains("hierarchy") && !j.at("hierarchy").is_null()) {
    s->hierarchy = hierarchy_from_json(j.at("hierarchy")).hierarchy;
    for (const json& o : detail::require_array(j, "services", "snapshot")) {
      ServiceOffering offering = offering_from_json(o, *s->hierarchy);
      s->offerings.emplace(offering.service_id, std::move(offering));
    }
  } else {
    s->hierarchy = initial->hierarchy;
  }
  state_ = std::move(s);
}

std::shared_ptr<const Broker::State> Broker::state() const {
  std::shared_lock lock(state_mutex_);
  return state_;
}

void Broker::publish(std::shared_ptr<const State> next) {
  std::unique_lock lock(state_mutex_);
  state_ = std::move(next);
}

void Broker::save_snapshot() const {
  if (!snapshot_path_) return;
  write_text_file(*snapshot_path_, snapshot_json(*state()).dump(2) + "\n");
}

Response Broker::put_hierarchy(std::string_view body) {
  try {
    HierarchyLoad load = hierarchy_from_json(parse_body(body));
    std::lock_guard writer(write_mutex_);
    auto next = std::make_shared<State>(*state());
    for (const auto& [id, o] : next->offerings) validate_offering(o, load.hierarchy);
    next->hierarchy = std::move(load.hierarchy);
    next->revision += 1;
    const auto revision = next->revision;
    publish(std::move(next));
    return {200, json{{"revision", revision}, {"warnings", load.warnings}}.dump()};
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response Broker::put_offering(std::string_view id, std::string_view body) {
  try {
    json j = parse_body(body);
    if (!j.is_object()) throw Error(ErrorCode::SchemaError, "offering must be a JSON object");
    if (!j.contains("id")) j["id"] = std::string(id);
    if (!j.at("id").is_string() || j.at("id").get<std::string>() != id) {
      throw Error(ErrorCode::SchemaError, "body id does not match path id '" + std::string(id) + "'");
    }
    std::lock_guard writer(write_mutex_);
    auto next = std::make_shared<State>(*state());
    if (!next->hierarchy) throw Error(ErrorCode::NoHierarchy, "PUT /v1/hierarchy before registering offerings");
    ServiceOffering o = offering_from_json(j, *next->hierarchy);
    next->offerings.insert_or_assign(o.service_id, std::move(o));
    next->revision += 1;
    const auto revision = next->revision;
    publish(std::move(next));
    return {200, json{{"revision", revision}}.dump()};
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response Broker::post_rank(std::string_view body) {
  try {
    const auto snap = state();
    if (!snap->hierarchy) throw Error(ErrorCode::NoHierarchy, "no hierarchy configured");
    const json j = parse_body(body);
    const RequirementSet req = requirements_from_json(j, *snap->hierarchy);
    RankOptions opts;
    if (j.contains("inject") && !j.at("inject").is_null()) {
      opts.injected = injection_from_json(j.at("inject"), *snap->hierarchy);
    }
    if (snap->offerings.empty()) throw Error(ErrorCode::EmptyMatch, "registry holds no offerings");

    Catalog catalog;
    catalog.hierarchy = *snap->hierarchy;
    for (const auto& [id, o] : snap->offerings) catalog.offerings.push_back(o);
    const MatchResult match = fn_match(catalog, req.functional);
    const RankingReport report = ahp_rank(catalog, match.matched, req, opts);

    const std::string report_id =
        "rpt-" + hex64(fnv1a64(std::to_string(snap->revision) + "\n" + j.dump()));
    json report_json = report_to_json(report);
    {
      std::unique_lock lock(reports_mutex_);
      reports_.try_emplace(report_id, report_json.dump());
    }
    json rejected = json::array();
    for (const auto& r : match.rejected) {
      rejected.push_back({{"service", r.service_id}, {"reason", to_string(r.reason)}, {"detail", r.detail}});
    }
    json out{{"report_id", report_id},
             {"revision", snap->revision},
             {"matched", match.matched},
             {"rejected", std::move(rejected)},
             {"best", select_best(report)},
             {"report", std::move(report_json)}};
    return {200, out.dump()};
  } catch (const Error& e) {
    return error_response(e);
  }
}

Response Broker::get_report(std::string_view id) const {
  std::shared_lock lock(reports_mutex_);
  auto it = reports_.find(std::string(id));
  if (it == reports_.end()) {
    return {404, json{{"error", "NotFound"}, {"detail", "no report '" + std::string(id) + "'"}}.dump()};
  }
  return {200, it->second};
}

Response Broker::healthz() const {
  const auto snap = state();
  return {200, json{{"status", "ok"},
                    {"revision", snap->revision},
                    {"hierarchy", snap->hierarchy.has_value()},
                    {"offerings", snap->offerings.size()}}
                   .dump()};
}

}  // namespace rankfarm
