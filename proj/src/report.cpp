#include "negmono/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace negmono {

ReportFormat report_format_from_string(std::string_view name) {
  if (name == "json") return ReportFormat::Json;
  if (name == "csv") return ReportFormat::Csv;
  throw std::invalid_argument("unknown report format '" + std::string(name) + "' (json or csv)");
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

void dump_into(const ordered_json& j, std::string& out) {
  switch (j.type()) {
    case ordered_json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += ordered_json(key).dump();
        out += ':';
        dump_into(value, out);
      }
      out += '}';
      break;
    }
    case ordered_json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump_into(j[i], out);
      }
      out += ']';
      break;
    }
    case ordered_json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "\"" + format_double(x) + "\"";
      break;
    }
    default:
      out += j.dump();
  }
}

ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

ordered_json number(const std::optional<double>& x) {
  if (!x) return nullptr;
  return number(*x);
}

double read_double(const ordered_json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

std::optional<double> read_optional(const ordered_json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return read_double(j.at(key));
}

std::string csv_cell(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string();
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || end != cell.c_str() + cell.size()) {
    throw std::invalid_argument("bad numeric CSV cell '" + cell + "'");
  }
  return v;
}

std::optional<double> parse_optional_cell(const std::string& cell) {
  if (cell.empty()) return std::nullopt;
  return parse_cell(cell);
}

void finish_satisfied(RelationReport& r) {
  if (r.gap) {
    r.satisfied = *r.gap >= -kSatisfactionTolerance;
  } else {
    r.satisfied.reset();
  }
}

}  // namespace

std::string dump_json(const ordered_json& j) {
  std::string out;
  dump_into(j, out);
  return out;
}

ordered_json to_json(const RelationReport& r) {
  ordered_json j;
  j["id"] = std::string(to_string(r.id));
  j["alpha"] = number(r.alpha);
  j["k"] = number(r.k);
  j["condition_holds"] = r.condition_holds;
  j["lhs_pow"] = number(r.lhs_pow);
  j["rhs"] = number(r.rhs);
  j["satisfied"] = r.satisfied ? ordered_json(*r.satisfied) : ordered_json(nullptr);
  j["gap"] = number(r.gap);
  j["kim_rhs"] = number(r.kim_rhs);
  j["tightness_delta"] = number(r.tightness_delta);
  return j;
}

RelationReport relation_report_from_json(const ordered_json& j) {
  RelationReport r;
  r.id = relation_from_string(j.at("id").get<std::string>());
  r.alpha = read_double(j.at("alpha"));
  r.k = read_optional(j, "k");
  r.condition_holds = j.at("condition_holds").get<bool>();
  r.lhs_pow = read_double(j.at("lhs_pow"));
  r.rhs = read_optional(j, "rhs");
  if (j.contains("satisfied") && !j.at("satisfied").is_null()) r.satisfied = j.at("satisfied").get<bool>();
  r.gap = read_optional(j, "gap");
  r.kim_rhs = read_optional(j, "kim_rhs");
  r.tightness_delta = read_optional(j, "tightness_delta");
  return r;
}

std::string reports_to_csv(std::span<const RelationReport> rows) {
  std::string out(kRelationCsvHeader);
  out += '\n';
  for (const auto& r : rows) {
    out += to_string(r.id);
    out += ',' + format_double(r.alpha);
    out += ',' + csv_cell(r.k);
    out += r.condition_holds ? ",true" : ",false";
    out += ',' + format_double(r.lhs_pow);
    out += ',' + csv_cell(r.rhs);
    out += ',' + csv_cell(r.kim_rhs);
    out += ',' + csv_cell(r.gap);
    out += ',' + csv_cell(r.tightness_delta);
    out += '\n';
  }
  return out;
}

std::vector<RelationReport> reports_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kRelationCsvHeader) {
    throw std::invalid_argument("CSV does not start with the relation report header");
  }
  std::vector<RelationReport> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != 9) throw std::invalid_argument("CSV row has " + std::to_string(cells.size()) + " cells, want 9");
    RelationReport r;
    r.id = relation_from_string(cells[0]);
    r.alpha = parse_cell(cells[1]);
    r.k = parse_optional_cell(cells[2]);
    if (cells[3] != "true" && cells[3] != "false") throw std::invalid_argument("bad condition cell '" + cells[3] + "'");
    r.condition_holds = cells[3] == "true";
    r.lhs_pow = parse_cell(cells[4]);
    r.rhs = parse_optional_cell(cells[5]);
    r.kim_rhs = parse_optional_cell(cells[6]);
    r.gap = parse_optional_cell(cells[7]);
    r.tightness_delta = parse_optional_cell(cells[8]);
    finish_satisfied(r);
    rows.push_back(r);
  }
  return rows;
}

std::string reports_to_json(std::span<const RelationReport> rows) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) arr.push_back(to_json(r));
  return dump_json(arr) + "\n";
}

std::vector<RelationReport> reports_from_json(std::string_view text) {
  const auto arr = ordered_json::parse(text);
  if (!arr.is_array()) throw std::invalid_argument("relation report JSON must be an array");
  std::vector<RelationReport> rows;
  for (const auto& j : arr) rows.push_back(relation_report_from_json(j));
  return rows;
}

ordered_json to_json(const CampaignConfig& c) {
  ordered_json j;
  j["dims"] = c.dims.factors();
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  ordered_json alphas = ordered_json::array();
  for (double a : c.alphas) alphas.push_back(number(a));
  j["alphas"] = alphas;
  ordered_json rel = ordered_json::array();
  for (RelationId id : c.relations) rel.push_back(std::string(to_string(id)));
  j["relations"] = rel;
  j["k_policy"] = c.k_policy.is_auto() ? ordered_json("auto") : number(*c.k_policy.explicit_k);
  j["sort_values"] = c.sort_values;
  j["roof"] = {{"cardinality", c.roof.cardinality},
               {"restarts", c.roof.restarts},
               {"max_iters", c.roof.max_iters},
               {"step_tolerance", number(c.roof.step_tolerance)},
               {"seed", c.roof.seed}};
  j["max_recorded_violations"] = c.max_recorded_violations;
  if (!c.states.empty()) {
    ordered_json states = ordered_json::array();
    for (const auto& s : c.states) states.push_back(ordered_json::parse(state_to_json(s)));
    j["states"] = states;
  }
  return j;
}

CampaignConfig campaign_config_from_json(const ordered_json& j, CampaignConfig c) {
  if (!j.is_object()) throw std::invalid_argument("campaign config must be a JSON object");
  static const std::vector<std::string> known = {"dims",     "samples",     "seed", "alphas", "relations",
                                                 "k_policy", "sort_values", "roof", "shards", "max_recorded_violations",
                                                 "states"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("unknown campaign config field '" + key + "'");
    }
  }
  try {
    if (j.contains("dims")) c.dims = Dims(j.at("dims").get<std::vector<int>>());
    if (j.contains("samples")) c.samples = j.at("samples").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("alphas")) {
      c.alphas.clear();
      for (const auto& a : j.at("alphas")) c.alphas.push_back(read_double(a));
    }
    if (j.contains("relations")) {
      c.relations.clear();
      for (const auto& r : j.at("relations")) c.relations.push_back(relation_from_string(r.get<std::string>()));
    }
    if (j.contains("k_policy")) {
      const auto& k = j.at("k_policy");
      c.k_policy = k.is_string() && k.get<std::string>() == "auto" ? KPolicy::automatic() : KPolicy::fixed(read_double(k));
    }
    if (j.contains("sort_values")) c.sort_values = j.at("sort_values").get<bool>();
    if (j.contains("roof")) {
      const auto& r = j.at("roof");
      if (r.contains("cardinality")) c.roof.cardinality = r.at("cardinality").get<int>();
      if (r.contains("restarts")) c.roof.restarts = r.at("restarts").get<int>();
      if (r.contains("max_iters")) c.roof.max_iters = r.at("max_iters").get<int>();
      if (r.contains("step_tolerance")) c.roof.step_tolerance = read_double(r.at("step_tolerance"));
      if (r.contains("seed")) c.roof.seed = r.at("seed").get<std::uint64_t>();
    }
    if (j.contains("shards")) c.shards = j.at("shards").get<int>();
    if (j.contains("max_recorded_violations")) c.max_recorded_violations = j.at("max_recorded_violations").get<int>();
    if (j.contains("states")) {
      c.states.clear();
      for (const auto& s : j.at("states")) {
        c.states.push_back(s.is_string() ? builtin_state(s.get<std::string>()) : parse_state_json(s.dump()).state);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("campaign config: ") + e.what());
  }
  c.validate();
  return c;
}

namespace {

ordered_json to_json(const BaselineStats& b) {
  return {{"evaluated", b.evaluated}, {"violations", b.violations}, {"worst_gap", number(b.worst_gap)}};
}

ordered_json to_json(const MeasureVector& mv, const std::vector<int>& labels) {
  ordered_json j;
  j["kind"] = std::string(to_string(mv.kind));
  j["lhs"] = number(mv.lhs);
  ordered_json values = ordered_json::array();
  for (double v : mv.values) values.push_back(number(v));
  j["values"] = values;
  j["labels"] = labels;
  if (!mv.tail_values.empty()) {
    ordered_json tails = ordered_json::array();
    for (double v : mv.tail_values) tails.push_back(number(v));
    j["tail_values"] = tails;
  }
  return j;
}

ordered_json to_json(const std::vector<MeasureValue>& details) {
  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < details.size(); ++i) {
    arr.push_back({{"subsystem", static_cast<int>(i) + 1},
                   {"value", number(details[i].value)},
                   {"method", std::string(to_string(details[i].method))},
                   {"certified_gap", number(details[i].certified_gap)}});
  }
  return arr;
}

}  // namespace

ordered_json to_json(const CampaignReport& report) {
  ordered_json j;
  j["config"] = to_json(report.config);
  ordered_json rel = ordered_json::array();
  for (const auto& s : report.relations) {
    ordered_json r;
    r["relation"] = std::string(to_string(s.id));
    r["alpha"] = number(s.alpha);
    r["reports"] = s.reports;
    r["not_applicable"] = s.not_applicable;
    r["evaluated"] = s.evaluated;
    r["condition_pass"] = s.condition_pass;
    r["violations"] = s.violations;
    r["worst_gap"] = number(s.worst_gap);
    r["mean_tightness_delta"] = number(s.mean_tightness_delta);
    r["min_tightness_delta"] = number(s.min_tightness_delta);
    rel.push_back(r);
  }
  j["relations"] = rel;
  j["baselines"] = {{"ckw", to_json(report.ckw)}, {"polygamy", to_json(report.polygamy)}};
  j["violation_count"] = report.violation_count;
  ordered_json vs = ordered_json::array();
  for (const auto& v : report.violations) {
    ordered_json e;
    e["sample"] = v.sample;
    e["seed"] = v.seed ? ordered_json(*v.seed) : ordered_json(nullptr);
    e["kind"] = v.kind;
    e["gap"] = number(v.gap);
    e["report"] = v.report ? to_json(*v.report) : ordered_json(nullptr);
    vs.push_back(e);
  }
  j["violations"] = vs;
  return j;
}

std::string campaign_to_csv(const CampaignReport& report) {
  std::string out =
      "relation,alpha,reports,not_applicable,evaluated,condition_pass,violations,worst_gap,mean_tightness_delta,"
      "min_tightness_delta\n";
  for (const auto& s : report.relations) {
    out += to_string(s.id);
    out += ',' + format_double(s.alpha);
    out += ',' + std::to_string(s.reports);
    out += ',' + std::to_string(s.not_applicable);
    out += ',' + std::to_string(s.evaluated);
    out += ',' + std::to_string(s.condition_pass);
    out += ',' + std::to_string(s.violations);
    out += ',' + csv_cell(s.worst_gap);
    out += ',' + csv_cell(s.mean_tightness_delta);
    out += ',' + csv_cell(s.min_tightness_delta);
    out += '\n';
  }
  auto baseline = [&](const char* name, const BaselineStats& b) {
    out += std::string(name) + ",," + std::to_string(b.evaluated) + ",0," + std::to_string(b.evaluated) + ',' +
           std::to_string(b.evaluated) + ',' + std::to_string(b.violations) + ',' + csv_cell(b.worst_gap) + ",,\n";
  };
  baseline("CKW", report.ckw);
  baseline("Polygamy", report.polygamy);
  return out;
}

ordered_json to_json(const Analysis& a) {
  ordered_json j;
  j["scren"] = to_json(a.scren, a.scren_labels);
  j["screnoa"] = to_json(a.screnoa, a.screnoa_labels);
  j["scren_details"] = to_json(a.scren_details);
  j["screnoa_details"] = to_json(a.screnoa_details);
  return j;
}

ordered_json to_json(const OracleCheckResult& result) {
  ordered_json j;
  j["max_min_error"] = number(result.max_min_error);
  j["max_max_error"] = number(result.max_max_error);
  ordered_json rows = ordered_json::array();
  for (const auto& r : result.rows) {
    rows.push_back({{"index", r.index},
                    {"rank", r.rank},
                    {"tangle", number(r.tangle)},
                    {"roof_min_squared", number(r.roof_min_squared)},
                    {"toa", number(r.toa)},
                    {"roof_max_squared", number(r.roof_max_squared)}});
  }
  j["rows"] = rows;
  return j;
}

std::string oracle_to_csv(const OracleCheckResult& result) {
  std::string out = "index,rank,tangle,roof_min_squared,toa,roof_max_squared\n";
  for (const auto& r : result.rows) {
    out += std::to_string(r.index) + ',' + std::to_string(r.rank) + ',' + format_double(r.tangle) + ',' +
           format_double(r.roof_min_squared) + ',' + format_double(r.toa) + ',' + format_double(r.roof_max_squared) +
           '\n';
  }
  return out;
}

std::string render(std::span<const RelationReport> rows, ReportFormat format) {
  return format == ReportFormat::Json ? reports_to_json(rows) : reports_to_csv(rows);
}

std::string render(const CampaignReport& report, ReportFormat format) {
  return format == ReportFormat::Json ? dump_json(to_json(report)) + "\n" : campaign_to_csv(report);
}

void write_output(const std::string& path, std::string_view text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("failed writing to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace negmono
