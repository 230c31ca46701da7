#include "rankfarm/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json_util.hpp"

namespace rankfarm {

using nlohmann::json;

namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

json vectors_to_json(const std::vector<RankingVector>& vs) {
  json out = json::array();
  for (const auto& v : vs) {
    out.push_back({{"name", v.name}, {"values", std::vector<double>(v.values.data(), v.values.data() + v.values.size())}});
  }
  return out;
}

Eigen::VectorXd values_from_json(const json& j, const std::string& ctx) {
  if (!j.is_array()) throw Error(ErrorCode::SchemaError, ctx + " must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::SchemaError, ctx + " must be an array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

std::vector<RankingVector> vectors_from_json(const json& j, const char* key) {
  std::vector<RankingVector> out;
  if (!j.contains(key)) return out;
  for (const json& v : detail::require_array(j, key, "report")) {
    const auto name = detail::require<std::string>(v, "name", std::string("report ") + key);
    out.push_back({name, values_from_json(v.at("values"), std::string(key) + " '" + name + "'")});
  }
  return out;
}

// Left-aligned columns separated by two spaces.
void write_table(std::ostringstream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size()) line += std::string(widths[c] - row[c].size() + 2, ' ');
    }
    out << line << '\n';
  }
}

std::vector<std::vector<std::string>> vector_table(const RankingReport& r, const std::vector<RankingVector>& vs,
                                                   bool text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{text ? "RF" : "service"};
  for (const auto& v : vs) header.push_back(v.name);
  rows.push_back(std::move(header));
  for (std::size_t i = 0; i < r.services.size(); ++i) {
    std::vector<std::string> row{r.services[i]};
    for (const auto& v : vs) {
      const double x = v.values(static_cast<Eigen::Index>(i));
      row.push_back(text ? fixed4(x) : detail::format_number(x));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::vector<std::string>> final_table(const RankingReport& r, bool text) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"rank", "service", "value", "label"});
  for (const auto& c : r.choices) {
    rows.push_back({std::to_string(c.rank), c.service_id, text ? fixed4(c.value) : detail::format_number(c.value),
                    c.label});
  }
  return rows;
}

void write_csv(std::ostringstream& out, const std::vector<std::vector<std::string>>& rows) {
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(row[c]);
    out << "\r\n";
  }
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view s) noexcept {
  if (s == "text") return ReportFormat::Text;
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  return std::nullopt;
}

std::optional<unsigned> parse_section(std::string_view s) noexcept {
  if (s == "sub") return kSectionSub;
  if (s == "top") return kSectionTop;
  if (s == "groups") return kSectionGroups;
  if (s == "final") return kSectionFinal;
  if (s == "all") return kSectionAll;
  return std::nullopt;
}

std::vector<KiviatData> kiviat_export(const RankingReport& report) {
  std::vector<KiviatData> out;
  for (std::size_t i = 0; i < report.services.size(); ++i) {
    KiviatData k{report.services[i], {}};
    for (const auto& t : report.top_level) k.axes.emplace_back(t.name, t.values(static_cast<Eigen::Index>(i)));
    out.push_back(std::move(k));
  }
  return out;
}

json kiviat_to_json(const std::vector<KiviatData>& data) {
  json out = json::array();
  for (const auto& k : data) {
    json axes = json::array();
    for (const auto& [axis, value] : k.axes) axes.push_back({{"axis", axis}, {"value", value}});
    out.push_back({{"service", k.service_id}, {"axes", std::move(axes)}});
  }
  return json{{"kiviat", std::move(out)}};
}

std::string kiviat_to_csv(const std::vector<KiviatData>& data) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"service"};
  if (!data.empty())
    for (const auto& [axis, value] : data.front().axes) header.push_back(axis);
  rows.push_back(std::move(header));
  for (const auto& k : data) {
    std::vector<std::string> row{k.service_id};
    for (const auto& [axis, value] : k.axes) row.push_back(detail::format_number(value));
    rows.push_back(std::move(row));
  }
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

json report_to_json(const RankingReport& report, unsigned sections) {
  json j;
  j["services"] = report.services;
  if (sections & kSectionSub) j["sub_level"] = vectors_to_json(report.sub_level);
  if (sections & kSectionTop) j["top_level"] = vectors_to_json(report.top_level);
  if (sections & kSectionGroups) j["groups"] = vectors_to_json(report.groups);
  if (sections & kSectionFinal) {
    j["final"] = std::vector<double>(report.final.data(), report.final.data() + report.final.size());
    json choices = json::array();
    for (const auto& c : report.choices) {
      choices.push_back({{"rank", c.rank}, {"service", c.service_id}, {"value", c.value}, {"label", c.label}});
    }
    j["choices"] = std::move(choices);
  }
  j["warnings"] = report.warnings;
  return j;
}

RankingReport report_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::SchemaError, "report must be an object");
  RankingReport r;
  for (const json& s : detail::require_array(j, "services", "report")) {
    if (!s.is_string()) throw Error(ErrorCode::SchemaError, "report services must be strings");
    r.services.push_back(s.get<std::string>());
  }
  r.sub_level = vectors_from_json(j, "sub_level");
  r.top_level = vectors_from_json(j, "top_level");
  r.groups = vectors_from_json(j, "groups");
  if (j.contains("final")) r.final = values_from_json(j.at("final"), "report final");
  if (j.contains("choices")) {
    for (const json& c : detail::require_array(j, "choices", "report")) {
      r.choices.push_back({detail::require<int>(c, "rank", "choice"), detail::require<std::string>(c, "service", "choice"),
                           detail::require<double>(c, "value", "choice"),
                           detail::require<std::string>(c, "label", "choice")});
    }
  }
  if (j.contains("warnings")) {
    for (const json& w : detail::require_array(j, "warnings", "report")) r.warnings.push_back(w.get<std::string>());
  }
  return r;
}

std::string render_report(const RankingReport& report, ReportFormat format, unsigned sections) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::Json:
      out << report_to_json(report, sections).dump(2) << '\n';
      break;
    case ReportFormat::Csv: {
      bool first = true;
      auto section = [&](const std::vector<std::vector<std::string>>& rows) {
        if (!first) out << "\r\n";
        first = false;
        write_csv(out, rows);
      };
      if (sections & kSectionSub) section(vector_table(report, report.sub_level, false));
      if (sections & kSectionTop) section(vector_table(report, report.top_level, false));
      if (sections & kSectionGroups) section(vector_table(report, report.groups, false));
      if (sections & kSectionFinal) section(final_table(report, false));
      break;
    }
    case ReportFormat::Text: {
      bool first = true;
      auto section = [&](const char* title, const std::vector<std::vector<std::string>>& rows) {
        if (!first) out << '\n';
        first = false;
        out << title << '\n';
        write_table(out, rows);
      };
      if (sections & kSectionSub) section("Sub-level Relative Ranking Vectors", vector_table(report, report.sub_level, true));
      if (sections & kSectionTop) section("Top-level Group Relative Ranking Vectors", vector_table(report, report.top_level, true));
      if (sections & kSectionGroups) section("QoS Group Relative Ranking Vectors", vector_table(report, report.groups, true));
      if (sections & kSectionFinal) section("Final Overall AHP Ranking", final_table(report, true));
      if (!report.warnings.empty()) {
        out << "\nWarnings\n";
        for (const auto& w : report.warnings) out << "- " << w << '\n';
      }
      break;
    }
    default:
      throw Error(ErrorCode::UnsupportedFormat, "unknown report format");
  }
  return out.str();
}

}  // namespace rankfarm
