#pragma once

#include "negmono/harness.hpp"
#include "negmono/inequality.hpp"

#include "json.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace negmono {

using ordered_json = nlohmann::ordered_json;

enum class ReportFormat { Json, Csv };
ReportFormat report_format_from_string(std::string_view name);

/// 17 significant digits; non-finite values become inf, -inf or nan.
std::string format_double(double x);

/// Compact JSON text with doubles through format_double. Key order is preserved.
std::string dump_json(const ordered_json& j);

ordered_json to_json(const RelationReport& r);
RelationReport relation_report_from_json(const ordered_json& j);

inline constexpr std::string_view kRelationCsvHeader =
    "relation,alpha,k,condition,lhs_pow,rhs,kim_rhs,gap,tightness_delta";
std::string reports_to_csv(std::span<const RelationReport> rows);
/// Inverse of reports_to_csv. `satisfied` is recomputed from the gap.
std::vector<RelationReport> reports_from_csv(std::string_view text);
std::string reports_to_json(std::span<const RelationReport> rows);
std::vector<RelationReport> reports_from_json(std::string_view text);

/// Field names follow CampaignConfig. `shards` is accepted on input but never echoed,
/// so a sharded run reports exactly like an unsharded one.
ordered_json to_json(const CampaignConfig& config);
CampaignConfig campaign_config_from_json(const ordered_json& j, CampaignConfig base = {});

ordered_json to_json(const CampaignReport& report);
std::string campaign_to_csv(const CampaignReport& report);

ordered_json to_json(const Analysis& analysis);
ordered_json to_json(const OracleCheckResult& result);
std::string oracle_to_csv(const OracleCheckResult& result);

std::string render(std::span<const RelationReport> rows, ReportFormat format);
std::string render(const CampaignReport& report, ReportFormat format);

/// Writes text to a file, or to stdout for an empty path or "-". Throws std::runtime_error on I/O failure.
void write_output(const std::string& path, std::string_view text);

template <class Report>
void emit_report(const Report& report, ReportFormat format, const std::string& path) {
  write_output(path, render(report, format));
}

}  // namespace negmono
