#include "doctest.h"

#include "lemma_suite.hpp"
#include "negmono/inequality.hpp"

#include <cmath>
#include <random>

using namespace negmono;

namespace {

MeasureVector vec(std::vector<double> values, double lhs, MeasureKind kind = MeasureKind::Scren) {
  MeasureVector mv;
  mv.values = std::move(values);
  mv.lhs = lhs;
  mv.kind = kind;
  return mv;
}

double factor_oracle(double alpha, double k) { return (std::pow(1.0 + k, alpha) - 1.0) / std::pow(k, alpha); }

std::vector<double> random_values(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (double& x : v) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("hamming weight") {
  CHECK(hamming_weight(0) == 0);
  CHECK(hamming_weight(3) == 2);
  CHECK(hamming_weight(5) == 2);
  CHECK(hamming_weight(255) == 8);
}

TEST_CASE("weight factor examples and oracle") {
  CHECK(weight_factor(2, 1) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(weight_factor(2, 0.5) == doctest::Approx(5.0).epsilon(1e-15));
  for (double k : {0.1, 0.37, 1.0}) CHECK(weight_factor(1, k) == doctest::Approx(1.0).epsilon(1e-14));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double alpha = -5 + 10 * u(rng);
    const double k = 0.01 + 0.99 * u(rng);
    CHECK(weight_factor(alpha, k) == doctest::Approx(factor_oracle(alpha, k)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(weight_factor(2, 0.0), std::domain_error);
  CHECK_THROWS_AS(weight_factor(2, 1.5), std::domain_error);
}

TEST_CASE("ordering and tail-sum conditions") {
  const std::vector<double> ones{1, 1};
  CHECK(check_ordering_condition(ones, 1.0));
  const std::vector<double> a{1, 0.6};
  CHECK_FALSE(check_ordering_condition(a, 0.5));
  const std::vector<double> zeros{0, 0, 0};
  CHECK(check_ordering_condition(zeros, 0.3));

  const std::vector<double> b{1, 0.3, 0.1};
  CHECK(check_tail_sum_condition(b, 0.5));
  CHECK(check_tail_sum_condition(ones, 1.0));
  const std::vector<double> c{1, 0.6, 0.6};
  CHECK_FALSE(check_tail_sum_condition(c, 1.0));
}

TEST_CASE("admissible k") {
  const std::vector<double> ones{1, 1};
  CHECK(admissible_k(ones, KMode::Ordering) == 1.0);
  const std::vector<double> a{1, 0.25};
  CHECK(admissible_k(a, KMode::Ordering) == doctest::Approx(0.25));
  const std::vector<double> inc{0.2, 0.5};
  CHECK_FALSE(admissible_k(inc, KMode::Ordering).has_value());
  const std::vector<double> zero_first{0.0, 0.5};
  CHECK_FALSE(admissible_k(zero_first, KMode::Ordering).has_value());
  const std::vector<double> zeros{0, 0, 0};
  CHECK(admissible_k(zeros, KMode::Ordering) == 1.0);
  const std::vector<double> b{1, 0.3, 0.1};
  CHECK(admissible_k(b, KMode::TailSum) == doctest::Approx(0.4));

  // The returned k satisfies the condition and nothing noticeably smaller does.
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    auto v = random_values(rng, 2 + i % 4);
    std::sort(v.rbegin(), v.rend());
    for (KMode mode : {KMode::Ordering, KMode::TailSum}) {
      const auto k = admissible_k(v, mode);
      auto check = [&](double kk) {
        return mode == KMode::Ordering ? check_ordering_condition(v, kk) : check_tail_sum_condition(v, kk);
      };
      if (!k) {
        CHECK_FALSE(check(1.0));
        continue;
      }
      CHECK(check(*k));
      if (*k > 1e-3) CHECK_FALSE(check(*k * (1 - 1e-6)));
    }
  }
}

TEST_CASE("bound examples") {
  const std::vector<double> ones{1, 1};
  CHECK(*bound_hamming(ones, 2, 1) == doctest::Approx(4.0));
  CHECK(*bound_power_j(ones, 2, 1) == doctest::Approx(4.0));
  CHECK(*bound_kim(ones, 2, KimVariant::Hamming) == doctest::Approx(3.0));
  CHECK(*bound_kim(ones, 1, KimVariant::Hamming) == doctest::Approx(2.0));
  CHECK(*bound_kim(ones, 1, KimVariant::PowerJ) == doctest::Approx(2.0));

  const std::vector<double> four{1, 1, 1, 1};
  CHECK(*bound_power_j(four, 2, 1) == doctest::Approx(40.0));
  CHECK(*bound_hamming(four, 2, 1) == doctest::Approx(16.0));
  CHECK(*bound_kim(four, 2, KimVariant::Hamming) == doctest::Approx(9.0));

  const std::vector<double> single{0.7};
  for (double alpha : {-1.0, 0.5, 2.0}) {
    CHECK(*bound_hamming(single, alpha, 0.3) == doctest::Approx(std::pow(0.7, alpha)));
    CHECK(*bound_power_j(single, alpha, 0.3) == doctest::Approx(std::pow(0.7, alpha)));
  }

  const std::vector<double> mixed{1, 0.5, 0.5, 0.25};
  CHECK(*bound_hamming(mixed, 1, 0.37) == doctest::Approx(2.25));

  const std::vector<double> avg{1, 1};
  CHECK(*bound_average(avg, -1) == doctest::Approx(1.0));
  const std::vector<double> twos{2, 2, 2};
  CHECK(*bound_average(twos, -1) == doctest::Approx(0.5));
  const std::vector<double> with_zero{1, 0};
  CHECK_FALSE(bound_average(with_zero, -1).has_value());
  CHECK_FALSE(bound_hamming(with_zero, -1, 1).has_value());
  CHECK(bound_hamming(with_zero, 2, 1).has_value());

  CHECK_THROWS_AS(bound_kim(ones, -1, KimVariant::Hamming), std::domain_error);
  CHECK_THROWS_AS(bound_average(ones, 0.5), std::domain_error);
}

TEST_CASE("all bounds collapse to the plain sum at alpha = 1") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int i = 0; i < 200; ++i) {
    const auto v = random_values(rng, 1 + i % 6);
    double sum = 0.0;
    for (double x : v) sum += x;
    const double k = u(rng);
    CHECK(*bound_hamming(v, 1, k) == doctest::Approx(sum).epsilon(1e-12));
    CHECK(*bound_power_j(v, 1, k) == doctest::Approx(sum).epsilon(1e-12));
    CHECK(*bound_kim(v, 1, KimVariant::Hamming) == doctest::Approx(sum).epsilon(1e-12));
    CHECK(*bound_kim(v, 1, KimVariant::PowerJ) == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("factor dominance over the Kim coefficient") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20000; ++i) {
    const double k = std::max(1e-6, u(rng));
    const double big = 1.0 + 9.0 * u(rng);
    const double small = u(rng);
    CHECK(weight_factor(big, k) >= big * (1 - 1e-12));
    CHECK(weight_factor(small, k) <= small * (1 + 1e-12) + 1e-15);
  }
  for (int i = 0; i < 500; ++i) {
    const auto v = random_values(rng, 2 + i % 5);
    const double k = std::max(1e-3, u(rng));
    const double big = 1.0 + 3.0 * u(rng);
    const double small = u(rng);
    CHECK(*bound_hamming(v, big, k) >= *bound_kim(v, big, KimVariant::Hamming) * (1 - 1e-12));
    CHECK(*bound_power_j(v, big, k) >= *bound_kim(v, big, KimVariant::PowerJ) * (1 - 1e-12));
    CHECK(*bound_hamming(v, small, k) <= *bound_kim(v, small, KimVariant::Hamming) * (1 + 1e-12));
    CHECK(*bound_power_j(v, small, k) <= *bound_kim(v, small, KimVariant::PowerJ) * (1 + 1e-12));
  }
}

TEST_CASE("scalar lemmas on a reduced sample") {
  using lemma_suite::Regime;
  for (Regime r : {Regime::AtLeastOne, Regime::UnitInterval, Regime::Negative}) {
    const auto out = lemma_suite::run(r, 20000, 7 + static_cast<int>(r), 1e-12);
    CHECK(out.violations == 0);
  }
}

TEST_CASE("tail-sum condition implies the ordering condition") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    auto v = random_values(rng, 2 + i % 5);
    if (i % 2) std::sort(v.rbegin(), v.rend());
    const double k = std::max(1e-3, u(rng));
    if (check_tail_sum_condition(v, k)) CHECK(check_ordering_condition(v, k));
  }
}

TEST_CASE("relation registry") {
  CHECK(kAllRelations.size() == 12);
  for (RelationId id : kAllRelations) {
    CHECK(relation_from_string(to_string(id)) == id);
    CHECK(relation_spec(id).id == id);
  }
  CHECK_THROWS_AS(relation_from_string("Thm9"), std::invalid_argument);
  CHECK(alpha_in_range(RelationId::Thm1Hamming, 1.0));
  CHECK_FALSE(alpha_in_range(RelationId::Thm1Hamming, 0.99));
  CHECK(alpha_in_range(RelationId::Thm4PolyHamming, 0.0));
  CHECK_FALSE(alpha_in_range(RelationId::Thm4PolyHamming, 1.01));
  CHECK(alpha_in_range(RelationId::Thm3Average, -0.1));
  CHECK_FALSE(alpha_in_range(RelationId::Thm7MonoHamming, 0.0));
  CHECK(relation_spec(RelationId::Thm1Hamming).kim_counterpart == RelationId::KimHamming13);
  CHECK(relation_spec(RelationId::Thm5PolyPowerJ).kim_counterpart == RelationId::KimPolyPowerJ16);
  CHECK_FALSE(relation_spec(RelationId::Thm6MonoPowerJ).kim_counterpart.has_value());
}

TEST_CASE("evaluate: antisymmetric-state vector under the Hamming bound") {
  const auto mv = vec({1, 1}, 4);
  const RelationReport r = evaluate_relation(mv, RelationId::Thm1Hamming, 2, KPolicy::automatic());
  CHECK(r.k == 1.0);
  CHECK(r.condition_holds);
  CHECK(r.lhs_pow == doctest::Approx(16));
  CHECK(*r.rhs == doctest::Approx(4));
  CHECK(*r.kim_rhs == doctest::Approx(3));
  CHECK(*r.satisfied);
  CHECK(*r.tightness_delta == doctest::Approx(1));
  CHECK(*r.gap == doctest::Approx(12));

  // Tightness delta at k=1 follows 2^α − (1+α).
  for (double alpha : {1.0, 1.5, 2.0, 3.0}) {
    const RelationReport s = evaluate_relation(mv, RelationId::Thm1Hamming, alpha, KPolicy::fixed(1.0));
    CHECK(*s.tightness_delta == doctest::Approx(std::pow(2.0, alpha) - (1 + alpha)).epsilon(1e-12));
  }

  const RelationReport avg = evaluate_relation(mv, RelationId::Thm3Average, -1, KPolicy::automatic());
  CHECK(avg.lhs_pow == doctest::Approx(0.25));
  CHECK(*avg.rhs == doctest::Approx(1.0));
  CHECK(*avg.satisfied);
  CHECK_FALSE(avg.k.has_value());
}

TEST_CASE("evaluate: GHZ assisted vector under the polygamy bound") {
  const auto mv = vec({1, 1}, 1, MeasureKind::Screnoa);
  const RelationReport r = evaluate_relation(mv, RelationId::Thm4PolyHamming, 0.5, KPolicy::fixed(1.0));
  CHECK(*r.rhs == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(r.lhs_pow == doctest::Approx(1.0));
  CHECK(*r.satisfied);
  CHECK(*r.tightness_delta == doctest::Approx(1.5 - std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("evaluate: single-subsystem vectors reduce to equality") {
  const auto mv = vec({0.64}, 0.64);
  for (double alpha : {1.0, 2.0}) {
    const RelationReport r = evaluate_relation(mv, RelationId::Thm1Hamming, alpha, KPolicy::automatic());
    CHECK(*r.gap == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(*r.satisfied);
  }
  const auto mva = vec({0.64}, 0.64, MeasureKind::Screnoa);
  const RelationReport p = evaluate_relation(mva, RelationId::Thm5PolyPowerJ, 0.5, KPolicy::automatic());
  CHECK(std::abs(*p.gap) < 1e-12);
}

TEST_CASE("evaluate: errors and not-applicable outcomes") {
  const auto mv = vec({1, 0.5}, 1);
  CHECK_THROWS_AS(evaluate_relation(mv, RelationId::Thm1Hamming, 0.5, KPolicy::automatic()), std::domain_error);
  CHECK_THROWS_AS(evaluate_relation(mv, RelationId::Thm4PolyHamming, 0.5, KPolicy::automatic()), std::invalid_argument);
  CHECK_THROWS_AS(evaluate_relation(vec({}, 1), RelationId::Thm1Hamming, 2, KPolicy::automatic()),
                  std::invalid_argument);
  CHECK_THROWS_AS(evaluate_relation(mv, RelationId::Thm1Hamming, 2, KPolicy::fixed(0.0)), std::domain_error);
  const auto mva = vec({1, 0.5, 0.2}, 1, MeasureKind::Screnoa);
  CHECK_THROWS_AS(evaluate_relation(mva, RelationId::Thm6MonoPowerJ, -1, KPolicy::automatic()),
                  std::invalid_argument);

  const auto increasing = vec({0.2, 0.5}, 1);
  const RelationReport na = evaluate_relation(increasing, RelationId::Thm1Hamming, 2, KPolicy::automatic());
  CHECK(na.not_applicable());
  CHECK_FALSE(na.condition_holds);
  CHECK_FALSE(na.k.has_value());

  const auto with_zero = vec({1, 0}, 1);
  const RelationReport z = evaluate_relation(with_zero, RelationId::Thm3Average, -1, KPolicy::automatic());
  CHECK(z.not_applicable());
  const auto tiny = vec({1, 1e-7}, 1, MeasureKind::Screnoa);
  CHECK(evaluate_relation(tiny, RelationId::Thm7MonoHamming, -0.5, KPolicy::automatic()).not_applicable());

  // An explicit k that breaks the condition is still evaluated, flagged by condition_holds.
  const RelationReport f = evaluate_relation(mv, RelationId::Thm1Hamming, 2, KPolicy::fixed(0.3));
  CHECK_FALSE(f.condition_holds);
  CHECK(f.satisfied.has_value());
}

TEST_CASE("evaluate: Kim relations use k = 1 and report no k") {
  const auto mv = vec({1, 0.5, 0.2}, 2);
  const RelationReport r = evaluate_relation(mv, RelationId::KimHamming13, 2, KPolicy::automatic());
  CHECK(r.k == std::nullopt);
  CHECK(r.condition_holds);
  CHECK(*r.rhs == doctest::Approx(1 + 2 * 0.25 + 2 * 0.04));
}

TEST_CASE("evaluate: satisfaction agrees with the gap sign at the tolerance") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 3000; ++i) {
    auto v = random_values(rng, 1 + i % 4);
    std::sort(v.rbegin(), v.rend());
    double sum = 0.0;
    for (double x : v) sum += x;
    const RelationId id = kAllRelations[static_cast<std::size_t>(i % 12)];
    const auto& spec = relation_spec(id);
    if (spec.condition == Condition::AssistedTail) continue;
    const double alpha = spec.range == AlphaRange::AtLeastOne ? 1 + 2 * u(rng)
                         : spec.range == AlphaRange::UnitInterval ? u(rng)
                                                                  : -2 * u(rng) - 0.01;
    const auto mv = vec(v, sum * (0.5 + u(rng)), spec.kind);
    const RelationReport r = evaluate_relation(mv, id, alpha, KPolicy::automatic());
    if (r.not_applicable()) continue;
    CHECK(*r.satisfied == (*r.gap >= -kSatisfactionTolerance));
    if (spec.kim_counterpart) {
      CHECK(r.tightness_delta.has_value());
    } else {
      CHECK_FALSE(r.tightness_delta.has_value());
    }
  }
}

TEST_CASE("evaluate: hand-computed power-j bound for negative alpha") {
  // v = (0.5, 0.4, 0.1), α = −2, k = 1: w = −3/4, rhs = 4 − (3/4)(6.25) + (9/16)(100).
  auto mv = vec({0.5, 0.4, 0.1}, 1.0, MeasureKind::Screnoa);
  mv.tail_values = {0.5, 0.1};
  const RelationReport r6 = evaluate_relation(mv, RelationId::Thm6MonoPowerJ, -2, KPolicy::fixed(1.0));
  CHECK(*r6.rhs == doctest::Approx(55.5625).epsilon(1e-13));
  CHECK(r6.condition_holds);
  const RelationReport r8 = evaluate_relation(mv, RelationId::Thm8MonoPowerJ, -2, KPolicy::fixed(1.0));
  CHECK(*r8.rhs == doctest::Approx(55.5625).epsilon(1e-13));
  const RelationReport r7 = evaluate_relation(mv, RelationId::Thm7MonoHamming, -2, KPolicy::fixed(1.0));
  CHECK(*r7.rhs == doctest::Approx(4 - 0.75 * 6.25 - 0.75 * 100).epsilon(1e-13));
}
