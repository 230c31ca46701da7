#pragma once

#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rankfarm/ranking.hpp"

namespace rankfarm {

enum class ReportFormat { Text, Json, Csv };

/// Bit set of report sections to emit.
enum Section : unsigned {
  kSectionSub = 1u << 0,
  kSectionTop = 1u << 1,
  kSectionGroups = 1u << 2,
  kSectionFinal = 1u << 3,
  kSectionAll = kSectionSub | kSectionTop | kSectionGroups | kSectionFinal,
};

std::optional<ReportFormat> parse_report_format(std::string_view s) noexcept;
std::optional<unsigned> parse_section(std::string_view s) noexcept;

/// Radar-chart data for one service: its top-level scores in hierarchy order.
struct KiviatData {
  std::string service_id;
  std::vector<std::pair<std::string, double>> axes;
};

std::vector<KiviatData> kiviat_export(const RankingReport& report);
nlohmann::json kiviat_to_json(const std::vector<KiviatData>& data);
std::string kiviat_to_csv(const std::vector<KiviatData>& data);

nlohmann::json report_to_json(const RankingReport& report, unsigned sections = kSectionAll);
/// Inverse of report_to_json for a full report.
RankingReport report_from_json(const nlohmann::json& j);

/// Deterministic rendering: equal reports give byte-identical output.
std::string render_report(const RankingReport& report, ReportFormat format, unsigned sections = kSectionAll);

}  // namespace rankfarm
