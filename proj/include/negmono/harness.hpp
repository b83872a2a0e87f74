#pragma once

#include "negmono/inequality.hpp"
#include "negmono/measures.hpp"
#include "negmono/qstate.hpp"
#include "negmono/roof.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace negmono {

/// Named states: `bell`, `ghz:N`, `w:N`, `product:d0,d1,...`, `paper_example`,
/// and `haar:d0,d1,...:seed`. Throws std::invalid_argument for anything else.
PureState builtin_state(std::string_view name);

PureState bell_state();
PureState ghz_state(int qubits);
PureState w_state(int qubits);
PureState product_state(const Dims& dims);
/// Totally antisymmetric three-qutrit state (|012⟩ − |021⟩ + |120⟩ − |102⟩ + |201⟩ − |210⟩)/√6.
PureState paper_example_state();

enum class TailPolicy { Never, IfPositive, Always };

struct AnalyzeOptions {
  RoofConfig roof;
  bool sort_values = false;
  TailPolicy tails = TailPolicy::IfPositive;
};

struct Analysis {
  MeasureVector scren;
  MeasureVector screnoa;
  /// Original subsystem index of every entry, after optional sorting.
  std::vector<int> scren_labels;
  std::vector<int> screnoa_labels;
  /// Per-subsystem results indexed by original subsystem j = 1…n−1 (entry j−1).
  std::vector<MeasureValue> scren_details;
  std::vector<MeasureValue> screnoa_details;
};

/// Measure vectors of subsystem 0 against each other factor, for a state with at least two factors.
Analysis analyze(const PureState& psi, const AnalyzeOptions& options = {});

/// Reorders a vector's values non-increasingly (stable), returning the applied permutation.
std::vector<int> sort_non_increasing(MeasureVector& mv);

/// One report per alpha. Throws like evaluate_relation.
std::vector<RelationReport> sweep(const MeasureVector& mv, RelationId relation, std::span<const double> alphas,
                                  KPolicy k_policy);
/// Analyzes the state and sweeps the vector of the relation's kind.
std::vector<RelationReport> sweep(const PureState& psi, RelationId relation, std::span<const double> alphas,
                                  KPolicy k_policy, const AnalyzeOptions& options = {});

struct CampaignConfig {
  Dims dims{2, 2, 2, 2};
  int samples = 1000;
  std::uint64_t seed = 42;
  std::vector<double> alphas{-2.0, -1.0, -0.5, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 3.0};
  std::vector<RelationId> relations{kAllRelations.begin(), kAllRelations.end()};
  KPolicy k_policy = KPolicy::automatic();
  bool sort_values = false;
  RoofConfig roof{.restarts = 8};
  int shards = 1;
  int max_recorded_violations = 100;
  /// Fixed states evaluated instead of Haar samples when nonempty.
  std::vector<PureState> states;

  /// Throws std::invalid_argument on an unusable configuration.
  void validate() const;
};

struct RelationStats {
  RelationId id = RelationId::Thm1Hamming;
  double alpha = 0.0;
  std::int64_t reports = 0;
  std::int64_t not_applicable = 0;
  std::int64_t evaluated = 0;
  std::int64_t condition_pass = 0;
  std::int64_t violations = 0;
  std::optional<double> worst_gap;
  std::optional<double> mean_tightness_delta;
  std::optional<double> min_tightness_delta;
};

struct BaselineStats {
  std::int64_t evaluated = 0;
  std::int64_t violations = 0;
  std::optional<double> worst_gap;
};

struct Violation {
  std::int64_t sample = 0;
  std::optional<std::uint64_t> seed;  // Haar seed of the sample; empty for injected states
  std::string kind;                   // relation name, "CKW" or "Polygamy"
  std::optional<RelationReport> report;
  double gap = 0.0;
};

struct CampaignReport {
  CampaignConfig config;
  std::vector<RelationStats> relations;
  BaselineStats ckw;
  BaselineStats polygamy;
  std::int64_t violation_count = 0;
  std::vector<Violation> violations;  // first max_recorded_violations, in sample order
};

/// Seed of the Haar state drawn for a sample index.
std::uint64_t sample_seed(const CampaignConfig& config, std::int64_t sample);
PureState campaign_state(const CampaignConfig& config, std::int64_t sample);
/// Analysis options used for a sample; the roof seed is derived from the sample index.
AnalyzeOptions campaign_analyze_options(const CampaignConfig& config, std::int64_t sample);

/// Deterministic for a given config, independent of the shard count.
CampaignReport run_campaign(const CampaignConfig& config);

/// Re-evaluates one sample of a campaign, e.g. to replay a recorded violation.
std::vector<RelationReport> replay_sample(const CampaignConfig& config, std::int64_t sample);

/// Mixed two-qubit states and the closed-form/roof comparison behind `oracle-check`.
struct OracleCheckConfig {
  int rank2_samples = 100;
  int full_rank_samples = 100;
  std::uint64_t seed = 2024;
  RoofConfig roof;
};

struct OracleCheckRow {
  int index = 0;
  int rank = 0;
  double tangle = 0.0;
  double roof_min_squared = 0.0;
  double toa = 0.0;
  double roof_max_squared = 0.0;
};

struct OracleCheckResult {
  std::vector<OracleCheckRow> rows;
  double max_min_error = 0.0;
  double max_max_error = 0.0;
};

OracleCheckResult oracle_check(const OracleCheckConfig& config);

}  // namespace negmono
