// Command-line front end: measure, sweep, campaign, oracle-check.

#include "negmono/harness.hpp"
#include "negmono/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace negmono;

namespace {

constexpr int kExitViolations = 2;
constexpr int kExitUsage = 1;

struct Common {
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  cmd->add_option("--out", c.out, "Output file (stdout when omitted)");
}

KPolicy parse_k(const std::string& text) {
  if (text == "auto") return KPolicy::automatic();
  std::size_t used = 0;
  double k = 0.0;
  try {
    k = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(k > 0.0 && k <= 1.0)) {
    throw std::invalid_argument("--k expects 'auto' or a value in (0, 1], got '" + text + "'");
  }
  return KPolicy::fixed(k);
}

Dims parse_dims_flag(const std::string& text) {
  std::vector<int> factors;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) factors.push_back(std::stoi(part));
  return Dims(std::move(factors));
}

PureState load_state(const std::string& name, const std::string& file) {
  if (!file.empty()) {
    const LoadedState loaded = read_state_file(file);
    if (std::abs(loaded.normalization - 1.0) > 1e-12) {
      std::cerr << "note: state renormalized by factor " << format_double(loaded.normalization) << "\n";
    }
    return loaded.state;
  }
  if (name.empty()) throw std::invalid_argument("no state given (name or --state-file)");
  return builtin_state(name);
}

bool any_theorem_violation(const std::vector<RelationReport>& rows) {
  for (const auto& r : rows) {
    if (r.condition_holds && r.satisfied && !*r.satisfied) return true;
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monogamy and polygamy checks for squared convex-roof negativity"};
  app.require_subcommand(1);

  // measure
  Common measure_common;
  std::string measure_state, measure_file;
  bool measure_sort = false;
  int measure_restarts = 32;
  std::uint64_t measure_seed = 0;
  auto* measure = app.add_subcommand("measure", "SCREN and SCRENoA vectors of one state");
  measure->add_option("state", measure_state, "Builtin state: bell, ghz:N, w:N, product:d,..., paper_example, haar:d,...:seed");
  measure->add_option("--state-file", measure_file, "JSON state file");
  measure->add_flag("--sort-values", measure_sort, "Sort per-subsystem values non-increasingly");
  measure->add_option("--restarts", measure_restarts, "Roof optimizer restarts");
  measure->add_option("--seed", measure_seed, "Roof optimizer seed");
  add_common(measure, measure_common);

  // sweep
  Common sweep_common;
  std::string sweep_state, sweep_file, sweep_relation = "Thm1Hamming", sweep_k = "auto";
  std::vector<double> sweep_alphas{1.0, 1.5, 2.0, 3.0};
  bool sweep_sort = false;
  int sweep_restarts = 32;
  std::uint64_t sweep_seed = 0;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate one relation over an alpha grid");
  sweep_cmd->add_option("state", sweep_state, "Builtin state name");
  sweep_cmd->add_option("--state-file", sweep_file, "JSON state file");
  sweep_cmd->add_option("--relation", sweep_relation, "Relation name");
  sweep_cmd->add_option("--alpha", sweep_alphas, "Alpha grid")->delimiter(',');
  sweep_cmd->add_option("--k", sweep_k, "auto or a value in (0,1]");
  sweep_cmd->add_flag("--sort-values", sweep_sort, "Sort per-subsystem values non-increasingly");
  sweep_cmd->add_option("--restarts", sweep_restarts, "Roof optimizer restarts");
  sweep_cmd->add_option("--seed", sweep_seed, "Roof optimizer seed");
  add_common(sweep_cmd, sweep_common);

  // campaign
  Common campaign_common;
  std::string campaign_config_file, campaign_dims, campaign_k;
  std::vector<std::string> campaign_relations, campaign_states;
  std::vector<double> campaign_alphas;
  int campaign_samples = 0, campaign_shards = 0, campaign_restarts = 0;
  std::uint64_t campaign_seed = 0;
  bool campaign_sort = false;
  auto* campaign = app.add_subcommand("campaign", "Seeded Monte Carlo check over Haar random states");
  campaign->add_option("--config", campaign_config_file, "JSON file with CampaignConfig fields");
  auto* samples_opt = campaign->add_option("--samples", campaign_samples, "Number of Haar samples");
  auto* seed_opt = campaign->add_option("--seed", campaign_seed, "Campaign seed");
  campaign->add_option("--dims", campaign_dims, "Local dimensions, e.g. 2,2,2,2");
  campaign->add_option("--relation", campaign_relations, "Relations to evaluate (repeatable)")->delimiter(',');
  campaign->add_option("--alpha", campaign_alphas, "Alpha grid")->delimiter(',');
  campaign->add_option("--k", campaign_k, "auto or a value in (0,1]");
  campaign->add_flag("--sort-values", campaign_sort, "Sort per-subsystem values non-increasingly");
  campaign->add_option("--shards", campaign_shards, "Worker threads");
  campaign->add_option("--restarts", campaign_restarts, "Roof optimizer restarts");
  campaign->add_option("--state", campaign_states, "Evaluate these builtin states instead of Haar samples");
  add_common(campaign, campaign_common);

  // oracle-check
  Common oracle_common;
  OracleCheckConfig oracle_config;
  double oracle_tolerance = 1e-6;
  auto* oracle = app.add_subcommand("oracle-check", "Roof optimizer against two-qubit closed forms");
  oracle->add_option("--samples", oracle_config.rank2_samples, "States per family (rank 2 and full rank)")
      ->each([&](const std::string& v) { oracle_config.full_rank_samples = std::stoi(v); });
  oracle->add_option("--seed", oracle_config.seed, "Sampling seed");
  oracle->add_option("--restarts", oracle_config.roof.restarts, "Roof optimizer restarts");
  oracle->add_option("--tolerance", oracle_tolerance, "Allowed error on squared values");
  add_common(oracle, oracle_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*measure) {
      AnalyzeOptions options;
      options.sort_values = measure_sort;
      options.roof.restarts = measure_restarts;
      options.roof.seed = measure_seed;
      options.tails = TailPolicy::Always;
      const PureState psi = load_state(measure_state, measure_file);
      const Analysis a = analyze(psi, options);
      std::string text;
      if (report_format_from_string(measure_common.format) == ReportFormat::Json) {
        text = dump_json(to_json(a)) + "\n";
      } else {
        text = "subsystem,scren,scren_method,screnoa,screnoa_method\n";
        text += "rest," + format_double(a.scren.lhs) + ",PureFormula," + format_double(a.screnoa.lhs) + ",PureFormula\n";
        for (std::size_t i = 0; i < a.scren_details.size(); ++i) {
          text += std::to_string(i + 1) + ',' + format_double(a.scren_details[i].value) + ',' +
                  std::string(to_string(a.scren_details[i].method)) + ',' + format_double(a.screnoa_details[i].value) +
                  ',' + std::string(to_string(a.screnoa_details[i].method)) + '\n';
        }
      }
      write_output(measure_common.out, text);
      return 0;
    }

    if (*sweep_cmd) {
      AnalyzeOptions options;
      options.sort_values = sweep_sort;
      options.roof.restarts = sweep_restarts;
      options.roof.seed = sweep_seed;
      const PureState psi = load_state(sweep_state, sweep_file);
      const auto rows = sweep(psi, relation_from_string(sweep_relation), sweep_alphas, parse_k(sweep_k), options);
      emit_report(std::span<const RelationReport>(rows), report_format_from_string(sweep_common.format),
                  sweep_common.out);
      return any_theorem_violation(rows) ? kExitViolations : 0;
    }

    if (*campaign) {
      CampaignConfig config;
      if (!campaign_config_file.empty()) {
        std::ifstream in(campaign_config_file);
        if (!in) throw std::invalid_argument("cannot read config '" + campaign_config_file + "'");
        config = campaign_config_from_json(ordered_json::parse(in));
      }
      if (*samples_opt) config.samples = campaign_samples;
      if (*seed_opt) config.seed = campaign_seed;
      if (!campaign_dims.empty()) config.dims = parse_dims_flag(campaign_dims);
      if (!campaign_relations.empty()) {
        config.relations.clear();
        for (const auto& r : campaign_relations) config.relations.push_back(relation_from_string(r));
      }
      if (!campaign_alphas.empty()) config.alphas = campaign_alphas;
      if (!campaign_k.empty()) config.k_policy = parse_k(campaign_k);
      if (campaign_sort) config.sort_values = true;
      if (campaign_shards > 0) config.shards = campaign_shards;
      if (campaign_restarts > 0) config.roof.restarts = campaign_restarts;
      for (const auto& s : campaign_states) config.states.push_back(builtin_state(s));
      config.validate();

      const CampaignReport report = run_campaign(config);
      emit_report(report, report_format_from_string(campaign_common.format), campaign_common.out);
      return report.violation_count > 0 ? kExitViolations : 0;
    }

    if (*oracle) {
      const OracleCheckResult result = oracle_check(oracle_config);
      const std::string text = report_format_from_string(oracle_common.format) == ReportFormat::Json
                                   ? dump_json(to_json(result)) + "\n"
                                   : oracle_to_csv(result);
      write_output(oracle_common.out, text);
      const bool ok = result.max_min_error <= oracle_tolerance && result.max_max_error <= oracle_tolerance;
      return ok ? 0 : kExitViolations;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
