// Acceptance suite: one numbered criterion per check, one PASS/FAIL line each.
// Usage: ckpt_acceptance [--only N] [--workers W]

#include "ckpt/analysis.hpp"
#include "ckpt/harness.hpp"
#include "ckpt/search.hpp"
#include "ckpt/simulator.hpp"
#include "ckpt/tracegen.hpp"
#include "reference_data.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace ckpt;

// Tolerances, pinned.
constexpr double kTableTolerance = 1.0;          // s, Young / Daly / RFO
constexpr double kOptimalTolerance = 2.0;        // s, Exponential optimum
constexpr double kContinuityTolerance = 1e-10;   // relative to max(1, waste)
constexpr double kReductionTolerance = 1e-12;
constexpr int kRandomDraws = 1000;
constexpr int kEndpointDraws = 100;
constexpr int kSweepInstances = 50;
constexpr double kSignificance = 2.0;            // standard errors
constexpr double kRelativeAgreement = 0.10;
constexpr int kCorrespondenceInstances = 100;
constexpr int kGainInstances = 100;
constexpr double kGain16 = 8.0, kGain16Band = 3.0;
constexpr double kGain19 = 19.0, kGain19Band = 4.0;
constexpr int kWeibullInstances = 20;
constexpr double kWeibullGain = 37.0, kWeibullGainBand = 8.0;
constexpr double kMtbfTolerance = 0.03;
constexpr int kSearchInstances = 100;
constexpr double kSearchPeriodTolerance = 0.10;

const CostParams kCosts{600.0, 600.0, 60.0, 600.0};
const PredictorParams kPredictor{0.85, 0.82};
constexpr double kUnitMtbf = 125.0 * kSecondsPerYear;

int g_workers = 1;

struct Verdict {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;
};

std::string fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

double stderr_of(const std::vector<double>& v) {
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / (v.size() - 1) / v.size());
}

// Standard error of the mean of a - b over paired instances.
double paired_stderr(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  return stderr_of(diff);
}

struct Runs {
  std::vector<double> wastes;
  std::vector<double> makespans;
};

ExperimentConfig scenario_config(const DistributionSpec& law, std::int64_t processors) {
  ExperimentConfig config;
  config.scenario.id = "acceptance";
  config.scenario.unit_family = law;
  config.scenario.processors = {processors};
  config.costs = kCosts;
  return config;
}

Cell scenario_cell(const DistributionSpec& law, std::int64_t processors, const PredictorParams& predictor) {
  return make_cell(scenario_config(law, processors), processors, predictor, 1.0);
}

Runs run_policy(const Cell& cell, const Policy& policy, const std::vector<EventTrace>& traces) {
  Runs runs;
  runs.wastes.resize(traces.size());
  runs.makespans.resize(traces.size());
  parallel_for(static_cast<int>(traces.size()), g_workers, [&](int i) {
    const SimOutcome out = simulate(traces[i], policy, cell.costs, cell.base_time, traces[i].seed);
    runs.wastes[i] = out.waste;
    runs.makespans[i] = out.makespan;
  });
  return runs;
}

Runs run_heuristic(const Cell& cell, Heuristic heuristic, int instances, std::uint64_t seed) {
  const auto traces = generate_traces(traces_for(heuristic, cell), seed, instances, g_workers);
  return run_policy(cell, reference_policy(heuristic, cell), traces);
}

double gain_percent(const Runs& baseline, const Runs& candidate) {
  return 100.0 * (mean(baseline.makespans) - mean(candidate.makespans)) / mean(baseline.makespans);
}

struct Draw {
  double mu;
  CostParams costs;
  PredictorParams predictor;
};

Draw random_draw(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Draw d;
  d.mu = std::exp(std::log(1e3) + unit(rng) * (std::log(1e7) - std::log(1e3)));
  auto cost = [&] { return 1.0 + unit(rng) * (0.1 * d.mu - 1.0); };
  d.costs = {cost(), cost(), cost(), cost()};
  d.predictor.precision = 1.0 - unit(rng);  // (0, 1]
  d.predictor.recall = unit(rng);           // [0, 1)
  return d;
}

// 1
Verdict period_table() {
  Verdict v;
  v.pass = true;
  int misses = 0;
  for (const auto& row : reference::kPeriodTable) {
    const PeriodRow got = period_row(std::int64_t{1} << row.log2_processors, kUnitMtbf, kCosts);
    const double dy = got.young - row.young, dd = got.daly - row.daly, dr = got.rfo - row.rfo;
    const double dopt = got.optimal - row.optimal;
    const bool ok = std::abs(dy) <= kTableTolerance && std::abs(dd) <= kTableTolerance &&
                    std::abs(dr) <= kTableTolerance && std::abs(dopt) <= kOptimalTolerance;
    if (!ok) ++misses;
    v.pass = v.pass && ok;
    v.details.push_back(fmt("N=2^%d young %.1f (%+.1f) daly %.1f (%+.1f) rfo %.1f (%+.1f) optimal %.1f (%+.1f vs %.0f)%s",
                            row.log2_processors, got.young, dy, got.daly, dd, got.rfo, dr, got.optimal, dopt,
                            row.optimal, ok ? "" : "  <- outside tolerance"));
  }
  v.summary = fmt("%d of %zu rows outside +-%.0f s (first-order) / +-%.0f s (optimum)", misses,
                  reference::kPeriodTable.size(), kTableTolerance, kOptimalTolerance);
  return v;
}

// 2
Verdict formula_identities() {
  std::mt19937_64 rng(20130201);
  double worst_continuity = 0.0, worst_reduction = 0.0;
  for (int i = 0; i < kRandomDraws; ++i) {
    const Draw d = random_draw(rng);
    const double split = d.costs.proactive_checkpoint / d.predictor.precision;
    const double w1 = waste_1(split, d.mu, d.costs);
    const double w2 = waste_2(split, d.mu, d.predictor, d.costs);
    worst_continuity = std::max(worst_continuity, std::abs(w1 - w2) / std::max(1.0, std::abs(w1)));

    const PredictorParams blind{0.0, d.predictor.precision};
    const double t = d.costs.checkpoint * (1.0 + 50.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    const double with = waste_with_prediction(t, d.mu, blind, d.costs);
    const double without = waste_no_prediction(t, d.mu, d.costs).total;
    worst_reduction = std::max(worst_reduction, std::abs(with - without) / std::max(1.0, std::abs(without)));
  }
  Verdict v;
  v.pass = worst_continuity <= kContinuityTolerance && worst_reduction <= kReductionTolerance;
  v.summary = fmt("%d draws: max break-even mismatch %.2e (<= %.0e), max zero-recall mismatch %.2e (<= %.0e)",
                  kRandomDraws, worst_continuity, kContinuityTolerance, worst_reduction, kReductionTolerance);
  return v;
}

// 3
Verdict endpoint_trust() {
  std::mt19937_64 rng(4242);
  int violations = 0;
  for (int i = 0; i < kEndpointDraws; ++i) {
    const Draw d = random_draw(rng);
    const double lower = std::max(d.costs.checkpoint, d.costs.proactive_checkpoint);
    const double t = lower * (1.0 + 9.0 * std::uniform_real_distribution<double>(0.0, 1.0)(rng));
    const double best = std::min(waste_simple_policy(t, 0.0, d.mu, d.predictor, d.costs).total,
                                 waste_simple_policy(t, 1.0, d.mu, d.predictor, d.costs).total);
    for (double q : {0.25, 0.5, 0.75}) {
      if (!(best <= waste_simple_policy(t, q, d.mu, d.predictor, d.costs).total)) ++violations;
    }
  }
  Verdict v;
  v.pass = violations == 0;
  v.summary = fmt("%d parameter sets x 3 interior q: %d interior values below the best endpoint", kEndpointDraws,
                  violations);
  return v;
}

// 4
Verdict threshold_sweep() {
  const Cell cell = scenario_cell(Exponential{1.0}, 1 << 16, kPredictor);
  const auto traces = generate_traces(cell.traces, 404, kSweepInstances, g_workers);
  const double period = optimize_period(cell.platform_mtbf, cell.predictor, cell.costs).period;
  const double limit = beta_lim(cell.costs, cell.predictor);
  const std::vector<double> factors{0.0, 0.5, 1.0, 2.0, 4.0};
  std::vector<Runs> runs;
  for (double f : factors) runs.push_back(run_policy(cell, ThresholdTrust{period, f * limit}, traces));
  std::size_t best = 0;
  for (std::size_t k = 1; k < runs.size(); ++k) {
    if (mean(runs[k].wastes) < mean(runs[best].wastes)) best = k;
  }
  const std::size_t at_limit = 2;
  const double gap = mean(runs[at_limit].wastes) - mean(runs[best].wastes);
  const double se = best == at_limit ? 0.0 : paired_stderr(runs[at_limit].wastes, runs[best].wastes);
  Verdict v;
  v.pass = gap <= kSignificance * se;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    v.details.push_back(fmt("beta=%.1f*beta_lim waste %.5f +- %.5f", factors[k], mean(runs[k].wastes),
                            stderr_of(runs[k].wastes)));
  }
  v.summary = fmt("T=%.0f s, %d traces: waste(beta_lim) - min = %.5f, paired SE %.5f", period, kSweepInstances, gap, se);
  return v;
}

// 5
Verdict simulation_matches_analysis() {
  const Cell cell = scenario_cell(Exponential{1.0}, 1 << 16, kPredictor);
  const auto traces = generate_traces(cell.traces, 505, kCorrespondenceInstances, g_workers);
  const double rfo_period = period_rfo(cell.platform_mtbf, cell.costs);
  const double rfo_model = waste_no_prediction(rfo_period, cell.platform_mtbf, cell.costs).total;
  const double rfo_sim = mean(run_policy(cell, Periodic{rfo_period}, traces).wastes);
  const Policy optimal = reference_policy(Heuristic::OptimalPrediction, cell);
  const double pred_model = waste_with_prediction(policy_period(optimal), cell.platform_mtbf, cell.predictor, cell.costs);
  const double pred_sim = mean(run_policy(cell, optimal, traces).wastes);
  const double rfo_rel = std::abs(rfo_sim - rfo_model) / rfo_model;
  const double pred_rel = std::abs(pred_sim - pred_model) / pred_model;
  Verdict v;
  v.pass = rfo_rel <= kRelativeAgreement && pred_rel <= kRelativeAgreement;
  v.summary = fmt("%d traces: RFO sim %.4f vs model %.4f (%.1f%%), prediction sim %.4f vs model %.4f (%.1f%%)",
                  kCorrespondenceInstances, rfo_sim, rfo_model, 100 * rfo_rel, pred_sim, pred_model, 100 * pred_rel);
  return v;
}

// 6
Verdict exponential_gains() {
  Verdict v;
  v.pass = true;
  for (auto [log2n, target, band] : {std::tuple{16, kGain16, kGain16Band}, std::tuple{19, kGain19, kGain19Band}}) {
    const Cell cell = scenario_cell(Exponential{1.0}, std::int64_t{1} << log2n, kPredictor);
    const Runs rfo = run_heuristic(cell, Heuristic::Rfo, kGainInstances, 606);
    const Runs optimal = run_heuristic(cell, Heuristic::OptimalPrediction, kGainInstances, 606);
    const double gain = gain_percent(rfo, optimal);
    const bool ok = std::abs(gain - target) <= band;
    v.pass = v.pass && ok;
    v.details.push_back(fmt("N=2^%d: RFO %.2f d, OptimalPrediction %.2f d, gain %.1f%% (target %.0f +- %.0f)%s", log2n,
                            mean(rfo.makespans) / kSecondsPerDay, mean(optimal.makespans) / kSecondsPerDay, gain,
                            target, band, ok ? "" : "  <- outside band"));
  }
  v.summary = fmt("%d Exponential instances per size", kGainInstances);
  return v;
}

// 7
Verdict weibull_gain() {
  const Cell cell = scenario_cell(Weibull{0.5, 1.0}, 1 << 16, kPredictor);
  const Runs rfo = run_heuristic(cell, Heuristic::Rfo, kWeibullInstances, 707);
  const Runs optimal = run_heuristic(cell, Heuristic::OptimalPrediction, kWeibullInstances, 707);
  const Runs young = run_heuristic(cell, Heuristic::Young, kWeibullInstances, 707);
  const Runs daly = run_heuristic(cell, Heuristic::Daly, kWeibullInstances, 707);
  const double gain = gain_percent(rfo, optimal);
  const double m_rfo = mean(rfo.makespans), m_young = mean(young.makespans), m_daly = mean(daly.makespans);
  const bool gain_ok = std::abs(gain - kWeibullGain) <= kWeibullGainBand;
  const bool order_ok = m_rfo < m_daly && m_rfo < m_young;
  Verdict v;
  v.pass = gain_ok && order_ok;
  v.details.push_back(fmt("makespan days: RFO %.2f, Daly %.2f, Young %.2f, OptimalPrediction %.2f",
                          m_rfo / kSecondsPerDay, m_daly / kSecondsPerDay, m_young / kSecondsPerDay,
                          mean(optimal.makespans) / kSecondsPerDay));
  v.summary = fmt("Weibull k=0.5, N=2^16, %d instances: gain %.1f%% (target %.0f +- %.0f)%s; RFO beats Daly and Young: %s",
                  kWeibullInstances, gain, kWeibullGain, kWeibullGainBand, gain_ok ? "" : " <- outside band",
                  order_ok ? "yes" : "no");
  return v;
}

// 8
Verdict inexact_ordering() {
  struct Case {
    const char* name;
    DistributionSpec law;
    int log2n;
    int instances;
    std::uint64_t seed;
  };
  const std::vector<Case> cases{{"Exponential N=2^16", Exponential{1.0}, 16, kGainInstances, 606},
                                {"Exponential N=2^19", Exponential{1.0}, 19, kGainInstances, 606},
                                {"Weibull k=0.5 N=2^16", Weibull{0.5, 1.0}, 16, kWeibullInstances, 707}};
  Verdict v;
  v.pass = true;
  int ties = 0;
  for (const Case& c : cases) {
    const Cell cell = scenario_cell(c.law, std::int64_t{1} << c.log2n, kPredictor);
    const Runs optimal = run_heuristic(cell, Heuristic::OptimalPrediction, c.instances, c.seed);
    const Runs inexact = run_heuristic(cell, Heuristic::InexactPrediction, c.instances, c.seed);
    const Runs rfo = run_heuristic(cell, Heuristic::Rfo, c.instances, c.seed);
    auto judge = [&](const Runs& lower, const Runs& upper, const char* label) {
      const double gap = mean(upper.makespans) - mean(lower.makespans);
      const double se = paired_stderr(upper.makespans, lower.makespans);
      std::string outcome;
      if (gap >= kSignificance * se && gap > 0.0) {
        outcome = "ordered";
      } else if (std::abs(gap) < kSignificance * se || gap == 0.0) {
        outcome = "tie";
        ++ties;
      } else {
        outcome = "REVERSED";
        v.pass = false;
      }
      return fmt("%s gap %.3f d (paired SE %.3f d): %s", label, gap / kSecondsPerDay, se / kSecondsPerDay,
                 outcome.c_str());
    };
    v.details.push_back(fmt("%s: Optimal %.3f d, Inexact %.3f d, RFO %.3f d; %s; %s", c.name,
                            mean(optimal.makespans) / kSecondsPerDay, mean(inexact.makespans) / kSecondsPerDay,
                            mean(rfo.makespans) / kSecondsPerDay, judge(optimal, inexact, "Inexact-Optimal").c_str(),
                            judge(inexact, rfo, "RFO-Inexact").c_str()));
  }
  v.summary = fmt("3 scenarios, 6 ordered pairs, %d reported as ties", ties);
  return v;
}

// 9
Verdict appendix_mtbf() {
  const std::int64_t units = 1024;
  const double target = kUnitMtbf / units;
  const double burn_in = 1000.0 * kSecondsPerYear;
  const double window = 1000.0 * kSecondsPerYear;
  Verdict v;
  v.pass = window >= 20.0 * target;
  for (const DistributionSpec& law : {DistributionSpec{Exponential{kUnitMtbf}}, DistributionSpec{Weibull{0.7, kUnitMtbf}}}) {
    std::vector<double> inside;
    for (double t : gen_platform_fault_trace(law, units, burn_in + window, 909)) {
      if (t >= burn_in) inside.push_back(t);
    }
    const double estimate = estimate_platform_mtbf(inside);
    const double rel = (estimate - target) / target;
    const bool ok = std::abs(rel) <= kMtbfTolerance;
    v.pass = v.pass && ok;
    v.details.push_back(fmt("%s: %zu faults in window, estimate %.0f s vs %.0f s (%+.2f%%)%s", describe(law).c_str(),
                            inside.size(), estimate, target, 100 * rel, ok ? "" : "  <- outside tolerance"));
  }
  v.summary = fmt("N=1024, window [%.0f y, %.0f y] (>= %.2f y required), tolerance %.0f%%", burn_in / kSecondsPerYear,
                  (burn_in + window) / kSecondsPerYear, 20.0 * target / kSecondsPerYear, 100 * kMtbfTolerance);
  return v;
}

// 10
Verdict best_period_sanity() {
  const Cell cell = scenario_cell(Exponential{1.0}, 1 << 16, kPredictor);
  const auto traces = generate_traces(cell.traces, 1010, kSearchInstances, g_workers);
  const double rfo = period_rfo(cell.platform_mtbf, cell.costs);
  SearchSpec spec;
  spec.grid = default_grid(rfo, cell.costs.checkpoint);
  spec.instances_per_candidate = kSearchInstances;
  spec.refinement_rounds = 2;
  const PolicyFamily family = policy_family(Heuristic::BestPeriodic, cell);
  const SearchResult best = best_period(family, traces, cell.costs, cell.base_time, spec, g_workers);
  const CandidateScore at_rfo = evaluate_period(family, rfo, traces, cell.costs, cell.base_time, g_workers);
  const double optimum = period_optimal_exponential(cell.platform_mtbf, cell.costs.checkpoint);
  const double rel = (best.period - optimum) / optimum;
  Verdict v;
  v.pass = best.mean_waste <= at_rfo.mean_waste && std::abs(rel) <= kSearchPeriodTolerance;
  v.summary = fmt("%d traces: T*=%.0f s (optimum %.0f s, %+.1f%%), waste %.5f vs RFO %.5f at %.0f s", kSearchInstances,
                  best.period, optimum, 100 * rel, best.mean_waste, at_rfo.mean_waste, rfo);
  return v;
}

// 11
Verdict micro_oracles() {
  auto trace = [](std::vector<Event> events) {
    EventTrace t;
    t.events = std::move(events);
    t.horizon = 10'000.0;
    return t;
  };
  const CostParams small{10.0, 8.0, 5.0, 8.0};
  const double a = simulate(trace({}), Periodic{100.0}, small, 180.0).makespan;
  const double b = simulate(trace({{150.0, EventKind::UnpredictedFault, 0.0}}), Periodic{100.0}, small, 180.0).makespan;
  const double c =
      simulate(trace({{60.0, EventKind::TruePrediction, 60.0}}), ThresholdTrust{100.0, 8.0}, small, 90.0).makespan;
  Verdict v;
  v.pass = a == 200.0 && b == 263.0 && c == 121.0;
  v.summary = fmt("makespans %g, %g, %g (expected 200, 263, 121)", a, b, c);
  return v;
}

// 12
Verdict recall_over_precision() {
  auto run = [](double recall, double precision) {
    const Cell cell = scenario_cell(Weibull{0.7, 1.0}, 1 << 16, {recall, precision});
    return run_heuristic(cell, Heuristic::OptimalPrediction, kWeibullInstances, 1212);
  };
  const Runs both = run(0.8, 0.8);
  const Runs low_recall = run(0.4, 0.8);
  const Runs low_precision = run(0.8, 0.4);
  const double recall_gain = mean(low_recall.wastes) - mean(both.wastes);
  const double precision_gain = mean(low_precision.wastes) - mean(both.wastes);
  const double se = paired_stderr(low_recall.wastes, low_precision.wastes);
  Verdict v;
  v.pass = recall_gain - precision_gain > kSignificance * se;
  v.details.push_back(fmt("waste (r=0.4,p=0.8) %.4f, (r=0.8,p=0.4) %.4f, (r=0.8,p=0.8) %.4f", mean(low_recall.wastes),
                          mean(low_precision.wastes), mean(both.wastes)));
  v.summary = fmt("Weibull k=0.7, N=2^16, %d instances: recall step saves %.4f, precision step saves %.4f, "
                  "difference %.4f vs 2 SE %.4f",
                  kWeibullInstances, recall_gain, precision_gain, recall_gain - precision_gain, kSignificance * se);
  return v;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Verdict()> check;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  g_workers = default_workers();
  app.add_option("--only", only, "Run a single criterion (1-12)");
  app.add_option("--workers", g_workers, "Worker threads");
  CLI11_PARSE(app, argc, argv);
  g_workers = std::max(1, g_workers);

  const std::vector<Criterion> criteria{
      {1, "period table reproduction", period_table},
      {2, "waste formula identities", formula_identities},
      {3, "endpoint trust optimality", endpoint_trust},
      {4, "break-even threshold is optimal in simulation", threshold_sweep},
      {5, "simulation matches the waste model", simulation_matches_analysis},
      {6, "Exponential gain over RFO", exponential_gains},
      {7, "Weibull k=0.5 gain and RFO ordering", weibull_gain},
      {8, "inexact prediction ordering", inexact_ordering},
      {9, "platform MTBF estimate", appendix_mtbf},
      {10, "brute-force period sanity", best_period_sanity},
      {11, "simulator micro-oracles", micro_oracles},
      {12, "recall matters more than precision", recall_over_precision},
  };
  if (only != 0 && (only < 1 || only > static_cast<int>(criteria.size()))) {
    std::cerr << "--only must lie in 1.." << criteria.size() << '\n';
    return 2;
  }

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict verdict;
    try {
      verdict = c.check();
    } catch (const std::exception& e) {
      verdict.pass = false;
      verdict.summary = std::string("error: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!verdict.pass) ++failures;
    std::cout << (verdict.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.title << ": " << verdict.summary
              << fmt(" (%.1f s)", seconds) << '\n';
    for (const auto& line : verdict.details) std::cout << "        " << line << '\n';
    std::cout.flush();
  }
  return failures == 0 ? 0 : 1;
}
