#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace negmono {

enum class MeasureKind { Scren, Screnoa };
std::string_view to_string(MeasureKind kind);

/// Full-cut value and per-subsystem values N(ρ_{A|B_j}), j = 0…N−1, in labeling order.
struct MeasureVector {
  std::vector<double> values;
  MeasureKind kind = MeasureKind::Scren;
  double lhs = 0.0;
  /// Assisted value of A against B_{i+1}…B_{N−1} for i = 0…N−2. Only used by
  /// Thm6MonoPowerJ; empty when not computed.
  std::vector<double> tail_values;
};

enum class RelationId {
  KimHamming13,
  KimPolyHamming14,
  KimPowerJ15,
  KimPolyPowerJ16,
  Thm1Hamming,
  Thm2PowerJ,
  Thm3Average,
  Thm4PolyHamming,
  Thm5PolyPowerJ,
  Thm6MonoPowerJ,
  Thm7MonoHamming,
  Thm8MonoPowerJ,
};

inline constexpr std::array kAllRelations = {
    RelationId::KimHamming13,   RelationId::KimPolyHamming14, RelationId::KimPowerJ15,
    RelationId::KimPolyPowerJ16, RelationId::Thm1Hamming,     RelationId::Thm2PowerJ,
    RelationId::Thm3Average,    RelationId::Thm4PolyHamming,  RelationId::Thm5PolyPowerJ,
    RelationId::Thm6MonoPowerJ, RelationId::Thm7MonoHamming,  RelationId::Thm8MonoPowerJ,
};

std::string_view to_string(RelationId id);
/// Throws std::invalid_argument for an unknown name.
RelationId relation_from_string(std::string_view name);

enum class Direction { AtLeast, AtMost };  // lhs_pow ≥ rhs  /  lhs_pow ≤ rhs
enum class AlphaRange { AtLeastOne, UnitInterval, Negative };
enum class Condition { Ordering, TailSum, AssistedTail, Positivity };
enum class BoundShape { Hamming, PowerJ, KimHamming, KimPowerJ, Average };

struct RelationSpec {
  RelationId id;
  MeasureKind kind;
  Direction direction;
  AlphaRange range;
  Condition condition;
  BoundShape bound;
  bool fixed_unit_k;                        // Kim's relations: condition checked at k = 1, no weight factor
  std::optional<RelationId> kim_counterpart;
};

const RelationSpec& relation_spec(RelationId id);
bool alpha_in_range(AlphaRange range, double alpha);
bool alpha_in_range(RelationId id, double alpha);

/// Number of ones in the binary expansion.
int hamming_weight(std::uint64_t j);

/// ((1+k)^α − 1)/k^α. Throws std::domain_error unless 0 < k ≤ 1.
double weight_factor(double alpha, double k);

inline constexpr double kConditionTolerance = 1e-12;
inline constexpr double kSatisfactionTolerance = 1e-9;
/// Measures at or below this are treated as zero whenever α ≤ 0.
inline constexpr double kPositivityFloor = 1e-6;

/// k·v_j ≥ v_{j+1} for all consecutive j.
bool check_ordering_condition(std::span<const double> values, double k);
/// k·v_i ≥ Σ_{j>i} v_j for i = 0…N−2.
bool check_tail_sum_condition(std::span<const double> values, double k);
/// k·v_i ≥ targets[i] for i = 0…N−2 (targets has N−1 entries).
bool check_against_condition(std::span<const double> values, std::span<const double> targets, double k);

enum class KMode { Ordering, TailSum };
/// Smallest k in (0,1] satisfying the condition; 1 when every compared term is zero;
/// nullopt when no k in (0,1] works.
std::optional<double> admissible_k(std::span<const double> values, KMode mode);
std::optional<double> admissible_k_against(std::span<const double> values, std::span<const double> targets);

/// Σ_j factor^{ω_H(j)} v_j^α. nullopt if α ≤ 0 and some value is not positive.
std::optional<double> bound_hamming(std::span<const double> values, double alpha, double k);
/// Σ_j factor^j v_j^α.
std::optional<double> bound_power_j(std::span<const double> values, double alpha, double k);
enum class KimVariant { Hamming, PowerJ };
/// Σ_j α^{e(j)} v_j^α. Throws std::domain_error for α < 0.
std::optional<double> bound_kim(std::span<const double> values, double alpha, KimVariant variant);
/// Mean of v_j^α. Throws std::domain_error unless α < 0.
std::optional<double> bound_average(std::span<const double> values, double alpha);

struct KPolicy {
  std::optional<double> explicit_k;  // empty selects the minimal admissible k
  static KPolicy automatic() { return {}; }
  static KPolicy fixed(double k) { return {k}; }
  bool is_auto() const noexcept { return !explicit_k.has_value(); }
};

struct RelationReport {
  RelationId id = RelationId::Thm1Hamming;
  double alpha = 0.0;
  std::optional<double> k;
  bool condition_holds = false;
  double lhs_pow = 0.0;
  std::optional<double> rhs;
  /// Empty when the relation was not evaluated (no admissible k, or a zero measure with α ≤ 0).
  std::optional<bool> satisfied;
  /// Signed slack, positive in the satisfied direction.
  std::optional<double> gap;
  std::optional<double> kim_rhs;
  std::optional<double> tightness_delta;

  bool not_applicable() const noexcept { return !satisfied.has_value(); }
};

/// Evaluates one relation on a measure vector exactly as given (no reordering).
/// Throws std::domain_error for α outside the relation's range and std::invalid_argument
/// for a kind mismatch or a missing tail vector.
RelationReport evaluate_relation(const MeasureVector& mv, RelationId id, double alpha, KPolicy k_policy);

}  // namespace negmono
