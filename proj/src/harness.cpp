#include "negmono/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>

namespace negmono {

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    out.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("cannot parse " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return value;
}

Dims parse_dims(std::string_view text) {
  std::vector<int> factors;
  for (auto part : split(text, ',')) factors.push_back(parse_number<int>(part, "dimension"));
  return Dims(std::move(factors));
}

Vector basis_vector(int dim, int index) {
  Vector v = Vector::Zero(dim);
  v[index] = 1.0;
  return v;
}

}  // namespace

PureState bell_state() {
  Vector v = Vector::Zero(4);
  v[0] = 1.0;
  v[3] = 1.0;
  return ket(v, Dims{2, 2});
}

PureState ghz_state(int qubits) {
  if (qubits < 2) throw std::invalid_argument("ghz: need at least 2 qubits");
  const Dims dims(std::vector<int>(static_cast<std::size_t>(qubits), 2));
  Vector v = Vector::Zero(dims.total());
  v[0] = 1.0;
  v[dims.total() - 1] = 1.0;
  return ket(v, dims);
}

PureState w_state(int qubits) {
  if (qubits < 2) throw std::invalid_argument("w: need at least 2 qubits");
  const Dims dims(std::vector<int>(static_cast<std::size_t>(qubits), 2));
  Vector v = Vector::Zero(dims.total());
  for (int q = 0; q < qubits; ++q) v[1 << q] = 1.0;
  return ket(v, dims);
}

PureState product_state(const Dims& dims) {
  return ket(basis_vector(dims.total(), 0), dims);
}

PureState paper_example_state() {
  const Dims dims{3, 3, 3};
  Vector v = Vector::Zero(27);
  auto at = [](int a, int b, int c) { return a * 9 + b * 3 + c; };
  v[at(0, 1, 2)] = 1.0;
  v[at(0, 2, 1)] = -1.0;
  v[at(1, 2, 0)] = 1.0;
  v[at(1, 0, 2)] = -1.0;
  v[at(2, 0, 1)] = 1.0;
  v[at(2, 1, 0)] = -1.0;
  return ket(v, dims);
}

PureState builtin_state(std::string_view name) {
  const auto parts = split(name, ':');
  const std::string_view head = parts[0];
  if (head == "bell" && parts.size() == 1) return bell_state();
  if (head == "paper_example" && parts.size() == 1) return paper_example_state();
  if (head == "ghz" && parts.size() == 2) return ghz_state(parse_number<int>(parts[1], "qubit count"));
  if (head == "w" && parts.size() == 2) return w_state(parse_number<int>(parts[1], "qubit count"));
  if (head == "product" && parts.size() == 2) return product_state(parse_dims(parts[1]));
  if (head == "haar" && parts.size() == 3) {
    return haar_random_pure(parse_dims(parts[1]), parse_number<std::uint64_t>(parts[2], "seed"));
  }
  throw std::invalid_argument("unknown builtin state '" + std::string(name) + "'");
}

std::vector<int> sort_non_increasing(MeasureVector& mv) {
  std::vector<int> perm(mv.values.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int a, int b) { return mv.values[a] > mv.values[b]; });
  std::vector<double> sorted;
  sorted.reserve(perm.size());
  for (int p : perm) sorted.push_back(mv.values[p]);
  mv.values = std::move(sorted);
  mv.tail_values.clear();
  return perm;
}

Analysis analyze(const PureState& psi, const AnalyzeOptions& options) {
  const Dims& dims = psi.dims();
  if (dims.count() < 2) {
    throw std::invalid_argument("analyze: state needs at least two factors");
  }
  const DensityMatrix rho = density(psi);
  const double lhs = pure_scren(psi, Bipartition::first_vs_rest(dims));

  Analysis out;
  out.scren.kind = MeasureKind::Scren;
  out.screnoa.kind = MeasureKind::Screnoa;
  out.scren.lhs = lhs;
  out.screnoa.lhs = lhs;

  for (int j = 1; j < dims.count(); ++j) {
    const std::array<int, 2> pair{0, j};
    const DensityMatrix rho_pair = partial_trace(rho, pair);
    const Bipartition cut = Bipartition::first_vs_rest(rho_pair.dims());
    RoofConfig roof = options.roof;
    roof.seed = derive_seed(options.roof.seed, static_cast<std::uint64_t>(j));
    out.scren_details.push_back(scren(rho_pair, cut, roof));
    out.screnoa_details.push_back(screnoa(rho_pair, cut, roof));
    out.scren.values.push_back(out.scren_details.back().value);
    out.screnoa.values.push_back(out.screnoa_details.back().value);
  }

  const int n = dims.count() - 1;
  out.scren_labels.resize(static_cast<std::size_t>(n));
  out.screnoa_labels.resize(static_cast<std::size_t>(n));
  std::iota(out.scren_labels.begin(), out.scren_labels.end(), 1);
  std::iota(out.screnoa_labels.begin(), out.screnoa_labels.end(), 1);
  if (options.sort_values) {
    const auto ps = sort_non_increasing(out.scren);
    const auto pa = sort_non_increasing(out.screnoa);
    for (int i = 0; i < n; ++i) {
      out.scren_labels[i] = ps[i] + 1;
      out.screnoa_labels[i] = pa[i] + 1;
    }
  }

  bool want_tails = options.tails == TailPolicy::Always;
  if (options.tails == TailPolicy::IfPositive) {
    want_tails = lhs > kPositivityFloor && std::all_of(out.screnoa.values.begin(), out.screnoa.values.end(),
                                                       [](double v) { return v > kPositivityFloor; });
  }
  if (want_tails && n >= 2) {
    out.screnoa.tail_values.resize(static_cast<std::size_t>(n - 1));
    for (int i = 0; i <= n - 2; ++i) {
      if (i == n - 2) {
        out.screnoa.tail_values[i] = out.screnoa.values[n - 1];
        continue;
      }
      std::vector<int> keep{0};
      for (int t = i + 1; t < n; ++t) keep.push_back(out.screnoa_labels[t]);
      std::sort(keep.begin(), keep.end());
      const DensityMatrix rho_tail = partial_trace(rho, keep);
      RoofConfig roof = options.roof;
      roof.seed = derive_seed(options.roof.seed, static_cast<std::uint64_t>(1000 + i));
      out.screnoa.tail_values[i] = screnoa(rho_tail, Bipartition::first_vs_rest(rho_tail.dims()), roof).value;
    }
  }
  return out;
}

std::vector<RelationReport> sweep(const MeasureVector& mv, RelationId relation, std::span<const double> alphas,
                                  KPolicy k_policy) {
  std::vector<RelationReport> rows;
  rows.reserve(alphas.size());
  for (double alpha : alphas) rows.push_back(evaluate_relation(mv, relation, alpha, k_policy));
  return rows;
}

std::vector<RelationReport> sweep(const PureState& psi, RelationId relation, std::span<const double> alphas,
                                  KPolicy k_policy, const AnalyzeOptions& options) {
  AnalyzeOptions opts = options;
  if (relation != RelationId::Thm6MonoPowerJ) opts.tails = TailPolicy::Never;
  const Analysis a = analyze(psi, opts);
  const auto& mv = relation_spec(relation).kind == MeasureKind::Scren ? a.scren : a.screnoa;
  return sweep(mv, relation, alphas, k_policy);
}

void CampaignConfig::validate() const {
  if (states.empty()) {
    if (samples < 1) throw std::invalid_argument("campaign: samples must be >= 1");
    if (dims.count() < 2) throw std::invalid_argument("campaign: dims need at least two factors");
  }
  for (const auto& s : states) {
    if (s.dims().count() < 2) throw std::invalid_argument("campaign: injected states need at least two factors");
  }
  if (shards < 1) throw std::invalid_argument("campaign: shards must be >= 1");
  if (relations.empty()) throw std::invalid_argument("campaign: no relations requested");
  if (alphas.empty()) throw std::invalid_argument("campaign: alpha grid is empty");
  if (k_policy.explicit_k && !(*k_policy.explicit_k > 0.0 && *k_policy.explicit_k <= 1.0)) {
    throw std::invalid_argument("campaign: explicit k must lie in (0, 1]");
  }
  if (max_recorded_violations < 0) throw std::invalid_argument("campaign: max_recorded_violations must be >= 0");
  roof.validate();
}

std::uint64_t sample_seed(const CampaignConfig& config, std::int64_t sample) {
  return derive_seed(config.seed, static_cast<std::uint64_t>(sample));
}

PureState campaign_state(const CampaignConfig& config, std::int64_t sample) {
  if (!config.states.empty()) return config.states.at(static_cast<std::size_t>(sample));
  return haar_random_pure(config.dims, sample_seed(config, sample));
}

AnalyzeOptions campaign_analyze_options(const CampaignConfig& config, std::int64_t sample) {
  AnalyzeOptions options;
  options.roof = config.roof;
  options.roof.seed = derive_seed(config.roof.seed, static_cast<std::uint64_t>(sample));
  options.sort_values = config.sort_values;
  const bool needs_tails = std::find(config.relations.begin(), config.relations.end(), RelationId::Thm6MonoPowerJ) !=
                           config.relations.end();
  options.tails = needs_tails ? TailPolicy::IfPositive : TailPolicy::Never;
  return options;
}

namespace {

struct Slot {
  RelationId id;
  double alpha;
};

std::vector<Slot> campaign_slots(const CampaignConfig& config) {
  std::vector<Slot> slots;
  for (RelationId id : config.relations) {
    for (double alpha : config.alphas) {
      if (alpha_in_range(id, alpha)) slots.push_back({id, alpha});
    }
  }
  return slots;
}

// Compact per-slot result kept for every sample until the ordered reduction.
struct SlotResult {
  enum : std::uint8_t { NotApplicable, ConditionFailed, Satisfied, Violated } status = NotApplicable;
  bool has_delta = false;
  double gap = 0.0;
  double delta = 0.0;
};

struct SampleResult {
  std::vector<SlotResult> slots;
  std::vector<RelationReport> violated;
  double ckw_gap = 0.0;
  double polygamy_gap = 0.0;
};

std::vector<RelationReport> evaluate_slots(const Analysis& a, const std::vector<Slot>& slots, KPolicy k_policy) {
  std::vector<RelationReport> reports;
  reports.reserve(slots.size());
  for (const Slot& s : slots) {
    const auto& mv = relation_spec(s.id).kind == MeasureKind::Scren ? a.scren : a.screnoa;
    reports.push_back(evaluate_relation(mv, s.id, s.alpha, k_policy));
  }
  return reports;
}

SampleResult run_sample(const CampaignConfig& config, const std::vector<Slot>& slots, std::int64_t sample) {
  const PureState psi = campaign_state(config, sample);
  const Analysis a = analyze(psi, campaign_analyze_options(config, sample));

  SampleResult out;
  out.slots.reserve(slots.size());
  for (RelationReport& r : evaluate_slots(a, slots, config.k_policy)) {
    SlotResult s;
    if (r.satisfied) {
      s.gap = *r.gap;
      if (!r.condition_holds) {
        s.status = SlotResult::ConditionFailed;
      } else if (*r.satisfied) {
        s.status = SlotResult::Satisfied;
      } else {
        s.status = SlotResult::Violated;
        out.violated.push_back(r);
      }
      if (r.tightness_delta) {
        s.has_delta = true;
        s.delta = *r.tightness_delta;
      }
    }
    out.slots.push_back(s);
  }
  const double scren_sum = std::accumulate(a.scren.values.begin(), a.scren.values.end(), 0.0);
  const double screnoa_sum = std::accumulate(a.screnoa.values.begin(), a.screnoa.values.end(), 0.0);
  out.ckw_gap = a.scren.lhs - scren_sum;
  out.polygamy_gap = screnoa_sum - a.screnoa.lhs;
  return out;
}

void add_baseline(BaselineStats& stats, double gap) {
  ++stats.evaluated;
  if (gap < -kSatisfactionTolerance) ++stats.violations;
  stats.worst_gap = stats.worst_gap ? std::min(*stats.worst_gap, gap) : gap;
}

}  // namespace

CampaignReport run_campaign(const CampaignConfig& config) {
  config.validate();
  const auto slots = campaign_slots(config);
  const std::int64_t total = config.states.empty() ? config.samples : static_cast<std::int64_t>(config.states.size());

  std::vector<SampleResult> results(static_cast<std::size_t>(total));
  const int shards = static_cast<int>(std::min<std::int64_t>(config.shards, total));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(shards));
  auto work = [&](int shard) {
    const std::int64_t begin = total * shard / shards;
    const std::int64_t end = total * (shard + 1) / shards;
    try {
      for (std::int64_t i = begin; i < end; ++i) results[static_cast<std::size_t>(i)] = run_sample(config, slots, i);
    } catch (...) {
      errors[static_cast<std::size_t>(shard)] = std::current_exception();
    }
  };
  if (shards == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (int s = 0; s < shards; ++s) threads.emplace_back(work, s);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  CampaignReport report;
  report.config = config;
  report.relations.resize(slots.size());
  std::vector<double> delta_sum(slots.size(), 0.0);
  std::vector<std::int64_t> delta_count(slots.size(), 0);
  for (std::size_t s = 0; s < slots.size(); ++s) {
    report.relations[s].id = slots[s].id;
    report.relations[s].alpha = slots[s].alpha;
  }

  for (std::int64_t i = 0; i < total; ++i) {
    const SampleResult& r = results[static_cast<std::size_t>(i)];
    for (std::size_t s = 0; s < slots.size(); ++s) {
      RelationStats& st = report.relations[s];
      const SlotResult& slot = r.slots[s];
      ++st.reports;
      if (slot.status == SlotResult::NotApplicable) {
        ++st.not_applicable;
        continue;
      }
      ++st.evaluated;
      if (slot.status == SlotResult::ConditionFailed) continue;
      ++st.condition_pass;
      if (slot.status == SlotResult::Violated) ++st.violations;
      st.worst_gap = st.worst_gap ? std::min(*st.worst_gap, slot.gap) : slot.gap;
      if (slot.has_delta) {
        delta_sum[s] += slot.delta;
        ++delta_count[s];
        st.min_tightness_delta = st.min_tightness_delta ? std::min(*st.min_tightness_delta, slot.delta) : slot.delta;
      }
    }
    add_baseline(report.ckw, r.ckw_gap);
    add_baseline(report.polygamy, r.polygamy_gap);

    const std::optional<std::uint64_t> seed =
        config.states.empty() ? std::optional<std::uint64_t>(sample_seed(config, i)) : std::nullopt;
    auto record = [&](Violation v) {
      ++report.violation_count;
      if (static_cast<int>(report.violations.size()) < config.max_recorded_violations) {
        report.violations.push_back(std::move(v));
      }
    };
    for (const RelationReport& rep : r.violated) {
      record({i, seed, std::string(to_string(rep.id)), rep, *rep.gap});
    }
    if (r.ckw_gap < -kSatisfactionTolerance) record({i, seed, "CKW", std::nullopt, r.ckw_gap});
    if (r.polygamy_gap < -kSatisfactionTolerance) record({i, seed, "Polygamy", std::nullopt, r.polygamy_gap});
  }

  for (std::size_t s = 0; s < slots.size(); ++s) {
    if (delta_count[s] > 0) {
      report.relations[s].mean_tightness_delta = delta_sum[s] / static_cast<double>(delta_count[s]);
    }
  }
  return report;
}

std::vector<RelationReport> replay_sample(const CampaignConfig& config, std::int64_t sample) {
  const PureState psi = campaign_state(config, sample);
  const Analysis a = analyze(psi, campaign_analyze_options(config, sample));
  return evaluate_slots(a, campaign_slots(config), config.k_policy);
}

OracleCheckResult oracle_check(const OracleCheckConfig& config) {
  OracleCheckResult out;
  const int total = config.rank2_samples + config.full_rank_samples;
  for (int i = 0; i < total; ++i) {
    const bool rank2 = i < config.rank2_samples;
    const DensityMatrix rho = random_mixed_state(Dims{2, 2}, rank2 ? 2 : 4, derive_seed(config.seed, static_cast<std::uint64_t>(i)));
    const Bipartition cut = Bipartition::first_vs_rest(rho.dims());

    RoofConfig roof = config.roof;
    roof.seed = derive_seed(config.roof.seed, static_cast<std::uint64_t>(i));
    roof.direction = RoofDirection::Min;
    const RoofResult lo = optimize_roof(rho, cut, roof);
    roof.direction = RoofDirection::Max;
    const RoofResult hi = optimize_roof(rho, cut, roof);

    OracleCheckRow row;
    row.index = i;
    row.rank = lo.rank;
    row.tangle = two_qubit_tangle(rho);
    row.toa = two_qubit_toa(rho);
    row.roof_min_squared = lo.value * lo.value;
    row.roof_max_squared = hi.value * hi.value;
    out.max_min_error = std::max(out.max_min_error, std::abs(row.roof_min_squared - row.tangle));
    out.max_max_error = std::max(out.max_max_error, std::abs(row.roof_max_squared - row.toa));
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace negmono
