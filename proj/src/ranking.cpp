#include "rankfarm/ranking.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "json_util.hpp"

namespace rankfarm {

using nlohmann::json;

namespace {

constexpr double kTieTol = 1e-12;

const RankingVector* find_in(const std::vector<RankingVector>& vs, std::string_view name) noexcept {
  for (const auto& v : vs)
    if (v.name == name) return &v;
  return nullptr;
}

Eigen::VectorXd aggregate(const std::vector<Eigen::VectorXd>& children, const std::vector<double>& weights) {
  return aggregate_level<double>(std::span<const Eigen::VectorXd>(children), std::span<const double>(weights));
}

}  // namespace

const RankingVector* RankingReport::find_sub(std::string_view name) const noexcept { return find_in(sub_level, name); }
const RankingVector* RankingReport::find_top(std::string_view name) const noexcept { return find_in(top_level, name); }
const RankingVector* RankingReport::find_group(std::string_view name) const noexcept { return find_in(groups, name); }

double RankingReport::final_value(std::string_view service_id) const {
  for (std::size_t i = 0; i < services.size(); ++i)
    if (services[i] == service_id) return final(static_cast<Eigen::Index>(i));
  throw Error(ErrorCode::SchemaError, "service '" + std::string(service_id) + "' is not in the report");
}

InjectedVectors injection_from_json(const json& j, const QoSHierarchy& hierarchy) {
  InjectedVectors out;
  const json& subs = detail::require_object(j, "sub_level", "injection");
  for (const auto& [attr, column] : subs.items()) {
    if (hierarchy.find_sub(attr) == nullptr) {
      throw Error(ErrorCode::UnknownAttribute, "injected vector for unknown attribute '" + attr + "'");
    }
    if (!column.is_object()) throw Error(ErrorCode::SchemaError, "injected vector '" + attr + "' must be an object");
    auto& dst = out[attr];
    for (const auto& [service, value] : column.items()) {
      if (!value.is_number() || !(value.get<double>() >= 0.0)) {
        throw Error(ErrorCode::SchemaError, "injected value " + attr + "/" + service + " must be a number >= 0");
      }
      dst[service] = value.get<double>();
    }
  }
  return out;
}

InjectedVectors load_injection(const std::filesystem::path& path, const QoSHierarchy& hierarchy) {
  return injection_from_json(read_json_file(path), hierarchy);
}

std::string ordinal_label(int rank) {
  static constexpr std::array<const char*, 20> kWords = {
      "First",       "Second",     "Third",     "Fourth",     "Fifth",     "Sixth",     "Seventh",
      "Eighth",      "Ninth",      "Tenth",     "Eleventh",   "Twelfth",   "Thirteenth", "Fourteenth",
      "Fifteenth",   "Sixteenth",  "Seventeenth", "Eighteenth", "Nineteenth", "Twentieth"};
  if (rank >= 1 && rank <= static_cast<int>(kWords.size())) return std::string(kWords[rank - 1]) + " Choice";
  const int mod100 = rank % 100;
  const char* suffix = "th";
  if (mod100 < 11 || mod100 > 13) {
    switch (rank % 10) {
      case 1: suffix = "st"; break;
      case 2: suffix = "nd"; break;
      case 3: suffix = "rd"; break;
      default: break;
    }
  }
  return std::to_string(rank) + suffix + " Choice";
}

Eigen::VectorXd final_rank(std::span<const RankingVector> group_vectors,
                           const std::map<std::string, double>& group_weights) {
  if (group_vectors.size() != group_weights.size()) {
    throw Error(ErrorCode::DimensionMismatch, std::to_string(group_vectors.size()) + " group vectors but " +
                                                  std::to_string(group_weights.size()) + " group weights");
  }
  std::vector<Eigen::VectorXd> children;
  std::vector<double> weights;
  for (const auto& g : group_vectors) {
    auto it = group_weights.find(g.name);
    if (it == group_weights.end()) throw Error(ErrorCode::DimensionMismatch, "no weight for group '" + g.name + "'");
    if (!(it->second >= 0.0)) throw Error(ErrorCode::WeightError, "group weight for '" + g.name + "' must be >= 0");
    if (it->second == 0.0) continue;  // group switched off
    children.push_back(g.values);
    weights.push_back(it->second);
  }
  if (children.empty()) throw Error(ErrorCode::WeightError, "every group weight is zero");
  return aggregate(children, weights);
}

RankingReport ahp_rank(const Catalog& catalog, std::span<const std::string> matched, const RequirementSet& req,
                       const RankOptions& opts) {
  if (matched.empty()) throw Error(ErrorCode::EmptyMatch, "no service satisfies the functional requirements");

  const QoSHierarchy hierarchy = apply_weight_overrides(catalog.hierarchy, req.weight_overrides);
  RankingReport report;
  std::vector<const ServiceOffering*> offerings;
  for (const auto& id : matched) {
    const ServiceOffering* o = catalog.find(id);
    if (o == nullptr) throw Error(ErrorCode::SchemaError, "matched service '" + id + "' is not in the catalog");
    offerings.push_back(o);
    report.services.push_back(id);
  }
  const auto nr = static_cast<Eigen::Index>(offerings.size());

  for (const QoSGroup& g : hierarchy.groups) {
    std::vector<Eigen::VectorXd> top_vectors;
    std::vector<double> top_weights;
    for (const TopLevelAttribute& t : g.attributes) {
      std::vector<Eigen::VectorXd> sub_vectors;
      std::vector<double> sub_weights;
      for (const AttributeSpec& s : t.sub) {
        Eigen::VectorXd rrrv(nr);
        if (auto inj = opts.injected.find(s.name); inj != opts.injected.end()) {
          for (Eigen::Index k = 0; k < nr; ++k) {
            const auto& id = report.services[static_cast<std::size_t>(k)];
            auto v = inj->second.find(id);
            if (v == inj->second.end()) {
              throw Error(ErrorCode::MissingQoSValue, "injected vector '" + s.name + "' has no entry for '" + id + "'");
            }
            rrrv(k) = v->second;
          }
          report.warnings.push_back("sub-level vector '" + s.name + "' injected (sums to " +
                                    detail::format_number(rrrv.sum()) + ")");
        } else {
          std::vector<double> values;
          values.reserve(offerings.size());
          for (const ServiceOffering* o : offerings) {
            auto v = o->qos_values.find(s.name);
            if (v == o->qos_values.end()) {
              throw Error(ErrorCode::MissingQoSValue, "service '" + o->service_id + "' has no value for '" + s.name + "'");
            }
            values.push_back(v->second);
          }
          std::optional<double> v_req;
          if (auto r = req.requested_qos.find(s.name); r != req.requested_qos.end() && r->second.is_target()) {
            v_req = r->second.value;
          }
          try {
            rrrv = principal_eigenvector(build_rrrm<double>(values, s.tendency, v_req, opts.smoothing), opts.power);
          } catch (const Error& e) {
            throw Error(e.code(), s.name + ": " + e.detail());
          }
        }
        report.sub_level.push_back({s.name, rrrv});
        sub_vectors.push_back(std::move(rrrv));
        sub_weights.push_back(s.weight);
      }
      Eigen::VectorXd top = aggregate(sub_vectors, sub_weights);
      report.top_level.push_back({t.name, top});
      top_vectors.push_back(std::move(top));
      top_weights.push_back(t.weight);
    }
    report.groups.push_back({g.id, aggregate(top_vectors, top_weights)});
  }

  std::map<std::string, double> group_weights;
  for (const auto& g : hierarchy.groups) group_weights[g.id] = g.weight;
  report.final = final_rank(report.groups, group_weights);

  std::vector<std::size_t> order(offerings.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& ids = report.services;
  const auto& fin = report.final;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double va = fin(static_cast<Eigen::Index>(a));
    const double vb = fin(static_cast<Eigen::Index>(b));
    if (va != vb) return va > vb;
    return ids[a] < ids[b];
  });
  // Values within kTieTol of their neighbour form one tie cluster ordered by id.
  for (std::size_t begin = 0; begin < order.size();) {
    std::size_t end = begin + 1;
    while (end < order.size() &&
           std::abs(fin(static_cast<Eigen::Index>(order[end - 1])) - fin(static_cast<Eigen::Index>(order[end]))) <=
               kTieTol) {
      ++end;
    }
    if (end - begin > 1) {
      std::sort(order.begin() + static_cast<std::ptrdiff_t>(begin), order.begin() + static_cast<std::ptrdiff_t>(end),
                [&](std::size_t a, std::size_t b) { return ids[a] < ids[b]; });
      std::string names;
      for (std::size_t k = begin; k < end; ++k) names += (k == begin ? "" : ", ") + ids[order[k]];
      report.warnings.push_back("tie at final value " +
                                detail::format_number(fin(static_cast<Eigen::Index>(order[begin]))) + " between " +
                                names + "; ordered by service id");
    }
    begin = end;
  }
  for (std::size_t k = 0; k < order.size(); ++k) {
    const int rank = static_cast<int>(k) + 1;
    report.choices.push_back({rank, ids[order[k]], fin(static_cast<Eigen::Index>(order[k])), ordinal_label(rank)});
  }
  return report;
}

const std::string& select_best(const RankingReport& report) {
  if (report.choices.empty()) throw Error(ErrorCode::EmptyMatch, "report has no choices");
  return report.choices.front().service_id;
}

}  // namespace rankfarm
