#include "negmono/inequality.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace negmono {

std::string_view to_string(MeasureKind kind) {
  return kind == MeasureKind::Scren ? "Scren" : "Screnoa";
}

namespace {

using enum RelationId;
using enum MeasureKind;
using enum Direction;
using enum AlphaRange;
using enum Condition;
using enum BoundShape;

constexpr std::array<RelationSpec, 12> kSpecs = {{
    {KimHamming13, Scren, AtLeast, AtLeastOne, Ordering, KimHamming, true, std::nullopt},
    {KimPolyHamming14, Screnoa, AtMost, UnitInterval, Ordering, KimHamming, true, std::nullopt},
    {KimPowerJ15, Scren, AtLeast, AtLeastOne, TailSum, KimPowerJ, true, std::nullopt},
    {KimPolyPowerJ16, Screnoa, AtMost, UnitInterval, TailSum, KimPowerJ, true, std::nullopt},
    {Thm1Hamming, Scren, AtLeast, AtLeastOne, Ordering, Hamming, false, KimHamming13},
    {Thm2PowerJ, Scren, AtLeast, AtLeastOne, TailSum, PowerJ, false, KimPowerJ15},
    {Thm3Average, Scren, AtMost, Negative, Positivity, Average, false, std::nullopt},
    {Thm4PolyHamming, Screnoa, AtMost, UnitInterval, Ordering, Hamming, false, KimPolyHamming14},
    {Thm5PolyPowerJ, Screnoa, AtMost, UnitInterval, TailSum, PowerJ, false, KimPolyPowerJ16},
    {Thm6MonoPowerJ, Screnoa, AtLeast, Negative, AssistedTail, PowerJ, false, std::nullopt},
    {Thm7MonoHamming, Screnoa, AtLeast, Negative, Ordering, Hamming, false, std::nullopt},
    {Thm8MonoPowerJ, Screnoa, AtLeast, Negative, TailSum, PowerJ, false, std::nullopt},
}};

constexpr std::array<std::string_view, 12> kNames = {
    "KimHamming13",    "KimPolyHamming14", "KimPowerJ15",    "KimPolyPowerJ16",
    "Thm1Hamming",     "Thm2PowerJ",       "Thm3Average",    "Thm4PolyHamming",
    "Thm5PolyPowerJ",  "Thm6MonoPowerJ",   "Thm7MonoHamming", "Thm8MonoPowerJ",
};

bool any_not_positive(std::span<const double> values) {
  return std::any_of(values.begin(), values.end(), [](double v) { return !(v > 0.0); });
}

std::vector<double> tail_sums(std::span<const double> values) {
  std::vector<double> out;
  if (values.size() < 2) return out;
  out.resize(values.size() - 1);
  double acc = 0.0;
  for (std::size_t i = values.size() - 1; i >= 1; --i) {
    acc += values[i];
    out[i - 1] = acc;
  }
  return out;
}

std::vector<double> successors(std::span<const double> values) {
  if (values.size() < 2) return {};
  return {values.begin() + 1, values.end()};
}

template <class Exponent>
std::optional<double> weighted_sum(std::span<const double> values, double alpha, double base, Exponent exponent) {
  if (alpha <= 0.0 && any_not_positive(values)) return std::nullopt;
  double sum = 0.0;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] == 0.0) continue;  // α > 0 here, so the term vanishes
    sum += std::pow(base, exponent(j)) * std::pow(values[j], alpha);
  }
  return sum;
}

void require_unit_k(double k) {
  if (!(k > 0.0 && k <= 1.0)) {
    throw std::domain_error("k must lie in (0, 1], got " + std::to_string(k));
  }
}

}  // namespace

const RelationSpec& relation_spec(RelationId id) {
  return kSpecs.at(static_cast<std::size_t>(id));
}

std::string_view to_string(RelationId id) {
  return kNames.at(static_cast<std::size_t>(id));
}

RelationId relation_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<RelationId>(i);
  }
  throw std::invalid_argument("unknown relation '" + std::string(name) + "'");
}

bool alpha_in_range(AlphaRange range, double alpha) {
  switch (range) {
    case AtLeastOne: return alpha >= 1.0;
    case UnitInterval: return alpha >= 0.0 && alpha <= 1.0;
    case Negative: return alpha < 0.0;
  }
  return false;
}

bool alpha_in_range(RelationId id, double alpha) {
  return alpha_in_range(relation_spec(id).range, alpha);
}

int hamming_weight(std::uint64_t j) {
  return std::popcount(j);
}

double weight_factor(double alpha, double k) {
  require_unit_k(k);
  return std::expm1(alpha * std::log1p(k)) / std::pow(k, alpha);
}

bool check_against_condition(std::span<const double> values, std::span<const double> targets, double k) {
  if (values.size() >= 1 && targets.size() != values.size() - 1) {
    throw std::invalid_argument("condition targets must have one entry fewer than the values");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (k * values[i] < targets[i] - kConditionTolerance) return false;
  }
  return true;
}

bool check_ordering_condition(std::span<const double> values, double k) {
  const auto next = successors(values);
  return check_against_condition(values, next, k);
}

bool check_tail_sum_condition(std::span<const double> values, double k) {
  const auto tails = tail_sums(values);
  return check_against_condition(values, tails, k);
}

std::optional<double> admissible_k_against(std::span<const double> values, std::span<const double> targets) {
  if (values.size() >= 1 && targets.size() != values.size() - 1) {
    throw std::invalid_argument("condition targets must have one entry fewer than the values");
  }
  double k = 0.0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] <= kConditionTolerance) continue;
    if (!(values[i] > 0.0)) return std::nullopt;
    k = std::max(k, targets[i] / values[i]);
  }
  if (k == 0.0 || k > 1.0) {
    // Degenerate (nothing to dominate) or only satisfiable within tolerance at k = 1.
    if (check_against_condition(values, targets, 1.0)) return 1.0;
    return std::nullopt;
  }
  return k;
}

std::optional<double> admissible_k(std::span<const double> values, KMode mode) {
  const auto targets = mode == KMode::Ordering ? successors(values) : tail_sums(values);
  return admissible_k_against(values, targets);
}

std::optional<double> bound_hamming(std::span<const double> values, double alpha, double k) {
  const double factor = weight_factor(alpha, k);
  return weighted_sum(values, alpha, factor, [](std::size_t j) { return hamming_weight(j); });
}

std::optional<double> bound_power_j(std::span<const double> values, double alpha, double k) {
  const double factor = weight_factor(alpha, k);
  return weighted_sum(values, alpha, factor, [](std::size_t j) { return static_cast<double>(j); });
}

std::optional<double> bound_kim(std::span<const double> values, double alpha, KimVariant variant) {
  if (alpha < 0.0) {
    throw std::domain_error("Kim's bounds are defined for alpha >= 0");
  }
  if (variant == KimVariant::Hamming) {
    return weighted_sum(values, alpha, alpha, [](std::size_t j) { return hamming_weight(j); });
  }
  return weighted_sum(values, alpha, alpha, [](std::size_t j) { return static_cast<double>(j); });
}

std::optional<double> bound_average(std::span<const double> values, double alpha) {
  if (!(alpha < 0.0)) {
    throw std::domain_error("average bound requires alpha < 0");
  }
  if (values.empty() || any_not_positive(values)) return std::nullopt;
  double sum = 0.0;
  for (double v : values) sum += std::pow(v, alpha);
  return sum / static_cast<double>(values.size());
}

namespace {

std::optional<double> evaluate_bound(BoundShape shape, std::span<const double> values, double alpha, double k) {
  switch (shape) {
    case Hamming: return bound_hamming(values, alpha, k);
    case PowerJ: return bound_power_j(values, alpha, k);
    case KimHamming: return bound_kim(values, alpha, KimVariant::Hamming);
    case KimPowerJ: return bound_kim(values, alpha, KimVariant::PowerJ);
    case Average: return bound_average(values, alpha);
  }
  return std::nullopt;
}

std::vector<double> condition_targets(const RelationSpec& spec, const MeasureVector& mv) {
  switch (spec.condition) {
    case Ordering: return successors(mv.values);
    case TailSum: return tail_sums(mv.values);
    case AssistedTail:
      if (mv.tail_values.size() + 1 != mv.values.size()) {
        throw std::invalid_argument(std::string(to_string(spec.id)) + " needs tail_values with N-1 entries");
      }
      return mv.tail_values;
    case Positivity: return {};
  }
  return {};
}

}  // namespace

RelationReport evaluate_relation(const MeasureVector& mv, RelationId id, double alpha, KPolicy k_policy) {
  const RelationSpec& spec = relation_spec(id);
  if (!alpha_in_range(spec.range, alpha)) {
    throw std::domain_error("alpha " + std::to_string(alpha) + " outside the range of " + std::string(to_string(id)));
  }
  if (mv.kind != spec.kind) {
    throw std::invalid_argument(std::string(to_string(id)) + " applies to " + std::string(to_string(spec.kind)) +
                                " vectors");
  }
  if (mv.values.empty()) {
    throw std::invalid_argument("measure vector has no subsystem values");
  }

  RelationReport report;
  report.id = id;
  report.alpha = alpha;
  report.lhs_pow = std::pow(mv.lhs, alpha);

  const auto targets = condition_targets(spec, mv);
  if (alpha <= 0.0) {
    auto too_small = [](double v) { return !(v > kPositivityFloor); };
    if (too_small(mv.lhs) || std::any_of(mv.values.begin(), mv.values.end(), too_small) ||
        std::any_of(targets.begin(), targets.end(), too_small)) {
      return report;
    }
  }

  std::optional<double> k;
  if (spec.condition == Positivity) {
    report.condition_holds = true;
  } else if (spec.fixed_unit_k) {
    report.condition_holds = check_against_condition(mv.values, targets, 1.0);
    k = 1.0;
  } else {
    if (k_policy.is_auto()) {
      k = admissible_k_against(mv.values, targets);
    } else {
      require_unit_k(*k_policy.explicit_k);
      k = k_policy.explicit_k;
    }
    if (!k) return report;
    report.k = k;
    report.condition_holds = check_against_condition(mv.values, targets, *k);
    if (spec.condition == TailSum && report.condition_holds && !check_ordering_condition(mv.values, *k)) {
      throw std::logic_error("tail-sum condition held without the ordering condition");
    }
  }

  report.rhs = evaluate_bound(spec.bound, mv.values, alpha, k.value_or(1.0));
  if (!report.rhs) return report;
  report.gap = spec.direction == AtLeast ? report.lhs_pow - *report.rhs : *report.rhs - report.lhs_pow;
  report.satisfied = *report.gap >= -kSatisfactionTolerance;

  if (spec.kim_counterpart) {
    const RelationSpec& kim = relation_spec(*spec.kim_counterpart);
    report.kim_rhs = evaluate_bound(kim.bound, mv.values, alpha, 1.0);
    if (report.kim_rhs) {
      report.tightness_delta =
          spec.direction == AtLeast ? *report.rhs - *report.kim_rhs : *report.kim_rhs - *report.rhs;
    }
  }
  return report;
}

}  // namespace negmono
