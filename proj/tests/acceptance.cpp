// Acceptance suite. Prints one PASS/FAIL line per criterion followed by the numbers behind it.
// The exit status is the number of failed criteria.

#include "lemma_suite.hpp"

#include "negmono/harness.hpp"
#include "negmono/report.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace negmono;

namespace {

// Pinned tolerances and budgets.
constexpr double kExactTol = 1e-9;
constexpr double kOptimizerGap = 1e-3;
constexpr double kExampleRelationTol = 5e-3;  // rhs, kim_rhs and delta inherit the marginal gap
constexpr double kExampleSeconds = 60;
constexpr double kOracleTol = 1e-6;
constexpr double kOracleSeconds = 300;
constexpr std::int64_t kLemmaTriples = 100000;
constexpr double kLemmaTol = 1e-12;
constexpr int kFourQubitSamples = 10000;
constexpr int kFiveQubitSamples = 1000;
constexpr double kCampaignSeconds = 900;
constexpr double kCampaignTol = 1e-9;  // also the slack for mean tightness, which is exactly 0 at alpha = 1

int failures = 0;

void verdict(int id, const char* name, bool pass, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

void note(const std::string& text) {
  std::printf("      %s\n", text.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string sha256(const std::string& text) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt("%02x", digest[i]);
  return hex;
}

bool is_negative_alpha_relation(RelationId id) {
  return id == RelationId::Thm3Average || id == RelationId::Thm6MonoPowerJ || id == RelationId::Thm7MonoHamming ||
         id == RelationId::Thm8MonoPowerJ;
}

const RelationStats* find(const CampaignReport& r, RelationId id, double alpha) {
  for (const auto& s : r.relations) {
    if (s.id == id && s.alpha == alpha) return &s;
  }
  return nullptr;
}

void paper_example() {
  const auto t0 = std::chrono::steady_clock::now();
  const PureState psi = paper_example_state();
  const double lhs = pure_scren(psi, Bipartition::first_vs_rest(psi.dims()));
  AnalyzeOptions options;
  const Analysis a = analyze(psi, options);
  const MeasureVector& mv = a.scren;
  const RelationReport r = evaluate_relation(mv, RelationId::Thm1Hamming, 2.0, KPolicy::fixed(1.0));
  const double elapsed = seconds_since(t0);

  double marginal_err = 0.0;
  for (double v : mv.values) marginal_err = std::max(marginal_err, std::abs(v - 1.0));
  const bool ok = std::abs(lhs - 4.0) <= kExactTol && marginal_err <= kOptimizerGap && r.rhs && r.kim_rhs &&
                  r.tightness_delta && std::abs(*r.rhs - 4.0) <= kExampleRelationTol &&
                  std::abs(*r.kim_rhs - 3.0) <= kExampleRelationTol &&
                  std::abs(*r.tightness_delta - 1.0) <= kExampleRelationTol && elapsed <= kExampleSeconds;
  verdict(1, "antisymmetric qutrit example", ok,
          fmt("lhs=%.12f marginals=(%.9f, %.9f) rhs=%.6f kim_rhs=%.6f delta=%.6f time=%.1fs", lhs, mv.values[0],
              mv.values[1], r.rhs.value_or(NAN), r.kim_rhs.value_or(NAN), r.tightness_delta.value_or(NAN), elapsed));
}

void oracle_equivalence() {
  const auto t0 = std::chrono::steady_clock::now();
  const OracleCheckResult r = oracle_check(OracleCheckConfig{});
  const double elapsed = seconds_since(t0);
  const bool ok = r.rows.size() == 200 && r.max_min_error <= kOracleTol && r.max_max_error <= kOracleTol &&
                  elapsed <= kOracleSeconds;
  verdict(2, "roof optimizer vs two-qubit closed forms", ok,
          fmt("states=%zu max|min^2-tangle|=%.3e max|max^2-toa|=%.3e time=%.1fs", r.rows.size(), r.max_min_error,
              r.max_max_error, elapsed));
}

void lemma_suites() {
  using lemma_suite::Regime;
  const lemma_suite::Outcome o1 = lemma_suite::run(Regime::AtLeastOne, kLemmaTriples, 101, kLemmaTol);
  const lemma_suite::Outcome o2 = lemma_suite::run(Regime::UnitInterval, kLemmaTriples, 202, kLemmaTol);
  const lemma_suite::Outcome o3 = lemma_suite::run(Regime::Negative, kLemmaTriples, 303, kLemmaTol);
  const bool ok = o1.violations == 0 && o2.violations == 0 && o3.violations == 0;
  verdict(3, "scalar lemmas", ok,
          fmt("alpha>=1: %lld/%lld, 0<=alpha<=1: %lld/%lld, alpha<0: %lld/%lld violations; worst scaled gaps %.2e %.2e "
              "%.2e",
              static_cast<long long>(o1.violations), static_cast<long long>(o1.triples),
              static_cast<long long>(o2.violations), static_cast<long long>(o2.triples),
              static_cast<long long>(o3.violations), static_cast<long long>(o3.triples), o1.worst_scaled_gap,
              o2.worst_scaled_gap, o3.worst_scaled_gap));
}

CampaignConfig ensemble(int qubits, int samples, std::uint64_t seed) {
  CampaignConfig c;
  c.dims = Dims(std::vector<int>(static_cast<std::size_t>(qubits), 2));
  c.samples = samples;
  c.seed = seed;
  c.sort_values = true;
  c.k_policy = KPolicy::automatic();
  c.max_recorded_violations = 1000;
  return c;
}

void print_relation_rows(const CampaignReport& r, const std::function<bool(RelationId)>& keep) {
  for (const auto& s : r.relations) {
    if (!keep(s.id)) continue;
    note(fmt("%-18s alpha=%5.2f  NA=%5lld  condition_pass=%5lld  violations=%4lld  worst_gap=%s  mean_delta=%s",
             std::string(to_string(s.id)).c_str(), s.alpha, static_cast<long long>(s.not_applicable),
             static_cast<long long>(s.condition_pass), static_cast<long long>(s.violations),
             s.worst_gap ? format_double(*s.worst_gap).c_str() : "-",
             s.mean_tightness_delta ? format_double(*s.mean_tightness_delta).c_str() : "-"));
  }
}

void campaigns() {
  const auto t0 = std::chrono::steady_clock::now();
  const CampaignReport four = run_campaign(ensemble(4, kFourQubitSamples, 4));
  const double t_four = seconds_since(t0);
  const CampaignReport five = run_campaign(ensemble(5, kFiveQubitSamples, 5));
  const double elapsed = seconds_since(t0);
  const std::vector<const CampaignReport*> both{&four, &five};

  // Criterion 4: relations with α ≥ 0, plus dominance over the Kim bounds.
  std::int64_t violations = 0, passes = 0;
  for (const auto* r : both) {
    for (const auto& s : r->relations) {
      if (is_negative_alpha_relation(s.id)) continue;
      violations += s.violations;
      passes += s.condition_pass;
    }
  }
  struct Dominance {
    RelationId id;
    std::vector<double> alphas;
  };
  const std::vector<Dominance> dominance{
      {RelationId::Thm1Hamming, {1, 1.5, 2, 3}},
      {RelationId::Thm2PowerJ, {1, 1.5, 2, 3}},
      {RelationId::Thm4PolyHamming, {0.25, 0.5, 0.75, 1}},
      {RelationId::Thm5PolyPowerJ, {0.25, 0.5, 0.75, 1}},
  };
  bool dominance_ok = true;
  std::string worst_dominance;
  for (const auto* r : both) {
    for (const auto& d : dominance) {
      for (double alpha : d.alphas) {
        const RelationStats* s = find(*r, d.id, alpha);
        // A relation whose condition never passes on the ensemble has no mean; that is not a dominance failure.
        if (s == nullptr || !s->mean_tightness_delta) continue;
        if (*s->mean_tightness_delta < -kCampaignTol) {
          dominance_ok = false;
          worst_dominance += fmt(" %s@%g=%.3e", std::string(to_string(d.id)).c_str(), alpha, *s->mean_tightness_delta);
        }
      }
    }
  }
  verdict(4, "non-negative alpha relations on Haar ensembles", violations == 0 && dominance_ok && elapsed <= kCampaignSeconds,
          fmt("4 qubits x %d + 5 qubits x %d, sorted, auto k: %lld condition passes, %lld violations, dominance %s%s; "
              "time=%.1fs (4q %.1fs)",
              kFourQubitSamples, kFiveQubitSamples, static_cast<long long>(passes), static_cast<long long>(violations),
              dominance_ok ? "holds" : "fails:", worst_dominance.c_str(), elapsed, t_four));
  for (const auto* r : both) {
    note(fmt("-- %zu qubits", r->config.dims.factors().size()));
    print_relation_rows(*r, [](RelationId id) { return !is_negative_alpha_relation(id); });
  }

  // Criterion 5: α < 0 relations on the same ensembles. Positivity failures are NotApplicable.
  std::int64_t neg_violations = 0, neg_passes = 0;
  for (const auto* r : both) {
    for (const auto& s : r->relations) {
      if (!is_negative_alpha_relation(s.id)) continue;
      neg_violations += s.violations;
      neg_passes += s.condition_pass;
    }
  }
  verdict(5, "negative alpha relations on Haar ensembles", neg_violations == 0,
          fmt("%lld condition passes, %lld violations", static_cast<long long>(neg_passes),
              static_cast<long long>(neg_violations)));
  for (const auto* r : both) {
    note(fmt("-- %zu qubits", r->config.dims.factors().size()));
    print_relation_rows(*r, is_negative_alpha_relation);
    int shown = 0;
    for (const auto& v : r->violations) {
      if (!v.report || shown == 3) continue;
      ++shown;
      note(fmt("   e.g. sample %lld (seed %llu) %s alpha=%g k=%s lhs=%.6f rhs=%.6f gap=%.3e",
               static_cast<long long>(v.sample), static_cast<unsigned long long>(v.seed.value_or(0)), v.kind.c_str(),
               v.report->alpha, v.report->k ? format_double(*v.report->k).c_str() : "-", v.report->lhs_pow,
               v.report->rhs.value_or(NAN), v.gap));
    }
  }
  // A W-class state where every pair value is a closed form, so the failure does not depend on the optimizer.
  {
    Vector amp = Vector::Zero(16);
    amp[8] = std::sqrt(0.5);
    amp[4] = std::sqrt(0.25);
    amp[2] = std::sqrt(0.2);
    amp[1] = std::sqrt(0.05);
    AnalyzeOptions o;
    o.sort_values = true;
    o.tails = TailPolicy::Always;
    o.roof.restarts = 8;
    const Analysis a = analyze(ket(amp, Dims{2, 2, 2, 2}), o);
    for (double alpha : {-0.5, -1.0, -2.0}) {
      const RelationReport t8 = evaluate_relation(a.screnoa, RelationId::Thm8MonoPowerJ, alpha, KPolicy::fixed(1.0));
      note(fmt("W-class state (0.5,0.25,0.2,0.05), Thm8MonoPowerJ alpha=%g k=1: lhs=%.6f rhs=%.6f gap=%.4f", alpha,
               t8.lhs_pow, t8.rhs.value_or(NAN), t8.gap.value_or(NAN)));
    }
  }

  // Criterion 6: baselines over every sample of both ensembles.
  std::int64_t evaluated = 0, base_violations = 0;
  for (const auto* r : both) {
    evaluated += r->ckw.evaluated + r->polygamy.evaluated;
    base_violations += r->ckw.violations + r->polygamy.violations;
  }
  verdict(6, "CKW monogamy and assisted polygamy baselines", base_violations == 0 && evaluated > 0,
          fmt("%lld checks, %lld violations; worst gaps CKW %s/%s, polygamy %s/%s", static_cast<long long>(evaluated),
              static_cast<long long>(base_violations),
              four.ckw.worst_gap ? format_double(*four.ckw.worst_gap).c_str() : "-",
              five.ckw.worst_gap ? format_double(*five.ckw.worst_gap).c_str() : "-",
              four.polygamy.worst_gap ? format_double(*four.polygamy.worst_gap).c_str() : "-",
              five.polygamy.worst_gap ? format_double(*five.polygamy.worst_gap).c_str() : "-"));
}

void determinism() {
  CampaignConfig c = ensemble(4, 300, 77);
  const std::string a = sha256(render(run_campaign(c), ReportFormat::Json));
  const std::string b = sha256(render(run_campaign(c), ReportFormat::Json));
  const std::string csv_a = sha256(render(run_campaign(c), ReportFormat::Csv));
  c.shards = 4;
  const std::string sharded = sha256(render(run_campaign(c), ReportFormat::Json));
  const std::string csv_b = sha256(render(run_campaign(c), ReportFormat::Csv));
  verdict(7, "byte-identical campaign reports", a == b && a == sharded && csv_a == csv_b,
          fmt("json %s / %s / sharded %s; csv %s", a.substr(0, 16).c_str(), b.substr(0, 16).c_str(),
              sharded.substr(0, 16).c_str(), csv_a == csv_b ? "match" : "differ"));
}

}  // namespace

int main() {
  try {
    paper_example();
    oracle_equivalence();
    lemma_suites();
    campaigns();
    determinism();
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance aborted: %s\n", e.what());
    return 1;
  }
  std::printf("%d criteria failed\n", failures);
  return failures;
}
