// Command-line front end: closed-form periods and wastes, trace generation,
// simulation, period search and full experiment sweeps.

#include "ckpt/analysis.hpp"
#include "ckpt/config.hpp"
#include "ckpt/harness.hpp"
#include "ckpt/search.hpp"
#include "ckpt/simulator.hpp"
#include "ckpt/tracegen.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace ckpt;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitPartial = 3;

// Durations are text with optional s, min, h, d or y suffixes.
struct CostFlags {
  std::string checkpoint = "600";
  std::string proactive;  // defaults to C
  std::string downtime = "60";
  std::string recovery = "600";

  void add(CLI::App& app) {
    app.add_option("--c", checkpoint, "Regular checkpoint duration C")->capture_default_str();
    app.add_option("--cp", proactive, "Proactive checkpoint duration Cp (default: C)");
    app.add_option("--d", downtime, "Downtime D")->capture_default_str();
    app.add_option("--r-cost", recovery, "Recovery duration R")->capture_default_str();
  }

  CostParams parse() const {
    CostParams costs;
    costs.checkpoint = parse_duration(checkpoint);
    costs.proactive_checkpoint = proactive.empty() ? costs.checkpoint : parse_duration(proactive);
    costs.downtime = parse_duration(downtime);
    costs.recovery = parse_duration(recovery);
    costs.validate();
    return costs;
  }
};

struct PlatformFlags {
  std::string mtbf;  // platform MTBF; overrides mtbf_ind / n
  std::string mtbf_ind = "125y";
  std::string processors = "2^16";

  void add(CLI::App& app) {
    app.add_option("--mtbf", mtbf, "Platform MTBF mu (overrides --mtbf-ind/--n)");
    app.add_option("--mtbf-ind", mtbf_ind, "Individual processor MTBF")->capture_default_str();
    app.add_option("--n", processors, "Number of processors (e.g. 65536 or 2^16)")->capture_default_str();
  }

  double platform_mtbf() const {
    if (!mtbf.empty()) return parse_duration(mtbf);
    return mu_platform({parse_count(processors), parse_duration(mtbf_ind)});
  }
};

struct PredictorFlags {
  double recall = 0.85;
  double precision = 0.82;

  void add(CLI::App& app) {
    app.add_option("--recall", recall, "Predictor recall r")->capture_default_str();
    app.add_option("--precision", precision, "Predictor precision p")->capture_default_str();
  }

  PredictorParams parse() const {
    PredictorParams p{recall, precision};
    p.validate();
    return p;
  }
};

// Scenario description shared by best-period and waste-curve.
struct ScenarioFlags {
  std::string dist = "exp";
  std::string mtbf_ind = "125y";
  std::string processors = "2^16";
  std::string horizon = "2y";
  std::string job_start = "1y";
  double years_per_platform = 0.0;  // 0: 10,000 synthetic, 250 log-based
  std::string false_predictions = "auto";
  int instances = 100;
  std::uint64_t seed = 1;

  void add(CLI::App& app) {
    app.add_option("--dist", dist, "Unit failure law: exp, weibull:K or fta:FILE")->capture_default_str();
    app.add_option("--mtbf-ind", mtbf_ind, "Individual processor MTBF")->capture_default_str();
    app.add_option("--n", processors, "Number of processors")->capture_default_str();
    app.add_option("--horizon", horizon, "Trace horizon")->capture_default_str();
    app.add_option("--job-start", job_start, "Job start date within the trace")->capture_default_str();
    app.add_option("--years-per-platform", years_per_platform, "Base time is this many years divided by N");
    app.add_option("--false-predictions", false_predictions, "auto, same or uniform")->capture_default_str();
    app.add_option("--instances", instances, "Traces per evaluated period")->capture_default_str();
    app.add_option("--seed", seed, "Base seed")->capture_default_str();
  }

  ExperimentConfig config(const CostParams& costs, const PredictorParams& predictor) const {
    ExperimentConfig c;
    c.scenario.individual_mtbf = parse_duration(mtbf_ind);
    c.scenario.unit_family = parse_distribution(dist, c.scenario.individual_mtbf, &c.scenario.log_based);
    c.scenario.processors = {parse_count(processors)};
    c.scenario.horizon = parse_duration(horizon);
    c.scenario.job_start = parse_duration(job_start);
    c.scenario.years_per_platform =
        years_per_platform > 0.0 ? years_per_platform : (c.scenario.log_based ? 250.0 : 10000.0);
    if (false_predictions == "same") c.scenario.false_predictions = FalsePredictionLaw::Same;
    else if (false_predictions == "uniform") c.scenario.false_predictions = FalsePredictionLaw::Uniform;
    else if (false_predictions != "auto") throw ConfigError("--false-predictions: expected auto, same or uniform");
    c.recalls = {predictor.recall};
    c.precisions = {predictor.precision};
    c.costs = costs;
    c.proactive_ratios = {costs.proactive_checkpoint / costs.checkpoint};
    c.instances = instances;
    c.base_seed = seed;
    c.validate();
    return c;
  }
};

std::string fmt(double value) { return format_double(value); }

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write " + path);
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checkpoint period analysis and fault-prediction simulation"};
  app.require_subcommand(1);
  int workers = default_workers();
  app.add_option("--workers", workers, "Worker threads (default: CKPT_WORKERS or all cores)");

  // periods
  auto* periods = app.add_subcommand("periods", "Young, Daly, RFO and exact Exponential optimum per platform size");
  std::string periods_mtbf_ind = "125y";
  std::vector<std::string> periods_n{"2^10", "2^11", "2^12", "2^13", "2^14", "2^15", "2^16", "2^17", "2^18", "2^19"};
  CostFlags periods_costs;
  periods->add_option("--mtbf-ind", periods_mtbf_ind, "Individual processor MTBF")->capture_default_str();
  periods->add_option("--n", periods_n, "Platform sizes")->delimiter(',');
  periods->add_option("--c", periods_costs.checkpoint, "Checkpoint duration C")->capture_default_str();
  periods->add_option("--r-cost", periods_costs.recovery, "Recovery duration R")->capture_default_str();
  periods->add_option("--d", periods_costs.downtime, "Downtime D")->capture_default_str();

  // waste
  auto* waste = app.add_subcommand("waste", "Closed-form waste at a given period");
  std::string waste_period;
  double waste_q = -1.0;
  CostFlags waste_costs;
  PlatformFlags waste_platform;
  PredictorFlags waste_predictor;
  waste->add_option("--t", waste_period, "Period T")->required();
  waste->add_option("--q", waste_q, "Trust probability of the randomized policy");
  waste_costs.add(*waste);
  waste_platform.add(*waste);
  waste_predictor.add(*waste);

  // optimize
  auto* optimize = app.add_subcommand("optimize", "Best period with and without prediction");
  CostFlags opt_costs;
  PlatformFlags opt_platform;
  PredictorFlags opt_predictor;
  opt_costs.add(*optimize);
  opt_platform.add(*optimize);
  opt_predictor.add(*optimize);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run one policy against a trace file");
  std::string sim_trace;
  std::string sim_policy = "periodic";
  std::string sim_period;
  std::string sim_tbase;
  std::string sim_beta;
  double sim_q = 1.0;
  std::uint64_t sim_seed = 0;
  CostFlags sim_costs;
  sim->add_option("--trace", sim_trace, "Trace CSV file")->required();
  sim->add_option("--policy", sim_policy, "periodic, threshold, random or inexact")->capture_default_str();
  sim->add_option("--t", sim_period, "Period T")->required();
  sim->add_option("--tbase", sim_tbase, "Useful work of the job")->required();
  sim->add_option("--beta", sim_beta, "Trust threshold (default: Cp)");
  sim->add_option("--q", sim_q, "Trust probability for the random policy")->capture_default_str();
  sim->add_option("--seed", sim_seed, "Seed of the random policy")->capture_default_str();
  sim_costs.add(*sim);

  // gen-trace
  auto* gen = app.add_subcommand("gen-trace", "Generate a merged event trace");
  std::string gen_dist = "exp";
  std::string gen_mean = "125y";
  std::string gen_n = "2^16";
  std::string gen_horizon = "2y";
  std::string gen_job_start = "1y";
  std::string gen_inexact = "0";
  std::string gen_false = "auto";
  std::string gen_out;
  std::uint64_t gen_seed = 1;
  PredictorFlags gen_predictor;
  gen->add_option("--dist", gen_dist, "exp, weibull:K, uniform or fta:FILE")->capture_default_str();
  gen->add_option("--mean", gen_mean, "Mean time between failures of one processor")->capture_default_str();
  gen->add_option("--n", gen_n, "Number of processors (fta: 4 per unit)")->capture_default_str();
  gen->add_option("--horizon", gen_horizon, "Trace horizon")->capture_default_str();
  gen->add_option("--job-start", gen_job_start, "Job start recorded in the trace")->capture_default_str();
  gen->add_option("--inexact", gen_inexact, "Window after a prediction where its fault strikes")->capture_default_str();
  gen->add_option("--false-predictions", gen_false, "auto, same or uniform")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output file (default: stdout)");
  gen_predictor.add(*gen);

  // best-period
  auto* best = app.add_subcommand("best-period", "Brute-force search of the best period on simulated traces");
  std::string best_family = "periodic";
  int best_rounds = 2;
  ScenarioFlags best_scenario;
  CostFlags best_costs;
  PredictorFlags best_predictor;
  best->add_option("--family", best_family, "periodic, prediction or inexact")->capture_default_str();
  best->add_option("--rounds", best_rounds, "Refinement rounds")->capture_default_str();
  best_scenario.add(*best);
  best_costs.add(*best);
  best_predictor.add(*best);

  // waste-curve
  auto* curve = app.add_subcommand("waste-curve", "Closed-form versus simulated waste along a period grid");
  std::string curve_heuristic = "rfo";
  std::vector<std::string> curve_grid;
  std::string curve_out;
  ScenarioFlags curve_scenario;
  CostFlags curve_costs;
  PredictorFlags curve_predictor;
  curve->add_option("--heuristic", curve_heuristic, "rfo (periodic), optimal-prediction or inexact-prediction")
      ->capture_default_str();
  curve->add_option("--grid", curve_grid, "Periods (default: 30 points around the recommended period)")->delimiter(',');
  curve->add_option("--out", curve_out, "Output file (default: stdout)");
  curve_scenario.add(*curve);
  curve_costs.add(*curve);
  curve_predictor.add(*curve);

  // ingest-fta
  auto* fta = app.add_subcommand("ingest-fta", "Summarize a file of availability durations");
  std::string fta_file;
  std::vector<double> fta_survival;
  fta->add_option("--file", fta_file, "Durations file, one value in seconds per line")->required();
  fta->add_option("--survival", fta_survival, "Print P(X >= t | X >= tau) for t,tau")->expected(2)->delimiter(',');

  // experiment
  auto* exp = app.add_subcommand("experiment", "Run a configured sweep and write CSV files");
  std::string exp_config;
  std::string exp_out = "results";
  int exp_instances = 0;
  std::uint64_t exp_seed = 0;
  bool exp_seed_given = false;
  bool exp_days = false;
  exp->add_option("--config", exp_config, "Experiment config file")->required();
  exp->add_option("--out", exp_out, "Output directory")->capture_default_str();
  exp->add_option("--instances", exp_instances, "Override the instance count");
  auto* seed_opt = exp->add_option("--seed", exp_seed, "Override the base seed");
  exp->add_flag("--days", exp_days, "Report makespans in days");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (periods->parsed()) {
      CostParams costs = periods_costs.parse();
      std::vector<PeriodRow> rows;
      for (const auto& n : periods_n) rows.push_back(period_row(parse_count(n), parse_duration(periods_mtbf_ind), costs));
      write_periods_csv(std::cout, rows);
      return kExitOk;
    }

    if (waste->parsed()) {
      const CostParams costs = waste_costs.parse();
      const double mu = waste_platform.platform_mtbf();
      const PredictorParams pred = waste_predictor.parse();
      const double t = parse_duration(waste_period);
      const WasteBreakdown plain = waste_no_prediction(t, mu, costs);
      std::cout << "mtbf_s," << fmt(mu) << '\n'
                << "period_s," << fmt(t) << '\n'
                << "no_prediction_fault_free," << fmt(plain.fault_free) << '\n'
                << "no_prediction_fault," << fmt(plain.fault) << '\n'
                << "no_prediction_total," << fmt(plain.total) << '\n'
                << "no_prediction_valid," << (plain.valid ? "true" : "false") << '\n'
                << "threshold_trust_total," << fmt(waste_with_prediction(t, mu, pred, costs)) << '\n';
      if (waste_q >= 0.0) {
        const WasteBreakdown simple = waste_simple_policy(t, waste_q, mu, pred, costs);
        std::cout << "random_trust_fault," << fmt(simple.fault) << '\n'
                  << "random_trust_total," << fmt(simple.total) << '\n'
                  << "random_trust_valid," << (simple.valid ? "true" : "false") << '\n';
      }
      return kExitOk;
    }

    if (optimize->parsed()) {
      const CostParams costs = opt_costs.parse();
      const double mu = opt_platform.platform_mtbf();
      const PredictorParams pred = opt_predictor.parse();
      const PeriodRecommendation rec = optimize_period(mu, pred, costs);
      const double no_pred = period_no_pred(mu, pred, costs);
      std::cout << "mtbf_s," << fmt(mu) << '\n'
                << "rfo_period_s," << fmt(period_rfo(mu, costs)) << '\n'
                << "beta_lim_s," << fmt(beta_lim(costs, pred)) << '\n'
                << "no_prediction_period_s," << fmt(no_pred) << '\n'
                << "no_prediction_waste," << fmt(waste_1(no_pred, mu, costs)) << '\n';
      if (pred.recall < 1.0) {
        const PredictionPeriod p = period_pred_detail(mu, pred, costs);
        std::cout << "prediction_extremum_s," << fmt(p.extremum) << '\n'
                  << "prediction_period_s," << fmt(p.period) << '\n'
                  << "prediction_waste," << fmt(waste_2(p.period, mu, pred, costs)) << '\n'
                  << "approximate_period_s," << fmt(period_pred_approx(mu, costs.checkpoint, pred.recall)) << '\n';
      }
      std::cout << "branch," << to_string(rec.branch) << '\n'
                << "period_s," << fmt(rec.period) << '\n'
                << "predicted_waste," << fmt(rec.predicted_waste) << '\n'
                << "clamped," << (rec.clamped ? "true" : "false") << '\n';
      return kExitOk;
    }

    if (sim->parsed()) {
      const CostParams costs = sim_costs.parse();
      std::ifstream in(sim_trace);
      if (!in) throw std::runtime_error("cannot open trace " + sim_trace);
      const EventTrace trace = read_trace_csv(in, sim_trace);
      const double t = parse_duration(sim_period);
      const double beta = sim_beta.empty() ? costs.proactive_checkpoint : parse_duration(sim_beta);
      Policy policy;
      if (sim_policy == "periodic") policy = Periodic{t};
      else if (sim_policy == "threshold") policy = ThresholdTrust{t, beta};
      else if (sim_policy == "inexact") policy = Inexact{t, beta};
      else if (sim_policy == "random") policy = RandomTrust{t, sim_q};
      else throw CLI::ValidationError("--policy", "expected periodic, threshold, random or inexact");
      const SimOutcome out = simulate(trace, policy, costs, parse_duration(sim_tbase), sim_seed);
      std::cout << "policy," << describe(policy) << '\n'
                << "makespan_s," << fmt(out.makespan) << '\n'
                << "waste," << fmt(out.waste) << '\n'
                << "unpredicted_faults_hit," << out.counts.unpredicted_faults_hit << '\n'
                << "trusted_predictions," << out.counts.trusted_predictions << '\n'
                << "ignored_predictions," << out.counts.ignored_predictions << '\n'
                << "false_alarms_paid," << out.counts.false_alarms_paid << '\n'
                << "periodic_ckpts," << out.counts.periodic_ckpts << '\n'
                << "proactive_ckpts," << out.counts.proactive_ckpts << '\n'
                << "rollbacks," << out.counts.rollbacks << '\n';
      return kExitOk;
    }

    if (gen->parsed()) {
      bool log_based = false;
      TraceScenario scenario;
      const std::int64_t processors = parse_count(gen_n);
      scenario.unit_distribution = parse_distribution(gen_dist, parse_duration(gen_mean), &log_based);
      scenario.units = log_based ? std::max<std::int64_t>(1, processors / 4) : processors;
      scenario.predictor = gen_predictor.parse();
      scenario.horizon = parse_duration(gen_horizon);
      scenario.job_start = parse_duration(gen_job_start);
      scenario.inexact_window = parse_duration(gen_inexact);
      if (gen_false == "uniform" || (gen_false == "auto" && log_based)) scenario.false_prediction_family = UniformMean{1.0};
      else if (gen_false != "auto" && gen_false != "same") throw ConfigError("--false-predictions: expected auto, same or uniform");
      if (const auto* emp = std::get_if<EmpiricalDurations>(&scenario.unit_distribution);
          emp && static_cast<std::size_t>(scenario.units) > emp->samples.size()) {
        std::cerr << "warning: " << scenario.units << " units exceed the " << emp->samples.size()
                  << " recorded availability intervals\n";
      }
      const EventTrace trace = generate_trace(scenario, gen_seed);
      std::ofstream file;
      write_trace_csv(open_output(gen_out, file), trace);
      return kExitOk;
    }

    if (best->parsed()) {
      const CostParams costs = best_costs.parse();
      const PredictorParams pred = best_predictor.parse();
      const ExperimentConfig config = best_scenario.config(costs, pred);
      const Cell cell = make_cell(config, config.scenario.processors.front(), pred,
                                  costs.proactive_checkpoint / costs.checkpoint);
      Heuristic heuristic = Heuristic::BestPeriodic;
      if (best_family == "prediction") heuristic = Heuristic::BestPrediction;
      else if (best_family == "inexact") heuristic = Heuristic::BestInexact;
      else if (best_family != "periodic") throw CLI::ValidationError("--family", "expected periodic, prediction or inexact");

      const auto traces = generate_traces(traces_for(heuristic, cell), config.base_seed, config.instances, workers);
      const double reference = policy_period(reference_policy(heuristic, cell));
      SearchSpec spec;
      spec.grid = default_grid(reference, costs.checkpoint);
      spec.instances_per_candidate = config.instances;
      spec.refinement_rounds = best_rounds;
      const SearchResult result = best_period(policy_family(heuristic, cell), traces, costs, cell.base_time, spec, workers);
      const CandidateScore at_reference =
          evaluate_period(policy_family(heuristic, cell), reference, traces, costs, cell.base_time, workers);
      std::cout << "mtbf_s," << fmt(cell.platform_mtbf) << '\n'
                << "base_time_s," << fmt(cell.base_time) << '\n'
                << "best_period_s," << fmt(result.period) << '\n'
                << "best_mean_waste," << fmt(result.mean_waste) << '\n'
                << "best_waste_stderr," << fmt(result.waste_stderr) << '\n'
                << "reference_period_s," << fmt(reference) << '\n'
                << "reference_mean_waste," << fmt(at_reference.mean_waste) << '\n'
                << "reference_waste_stderr," << fmt(at_reference.waste_stderr) << '\n'
                << "candidates_evaluated," << result.evaluated.size() << '\n';
      return kExitOk;
    }

    if (curve->parsed()) {
      const CostParams costs = curve_costs.parse();
      const PredictorParams pred = curve_predictor.parse();
      const ExperimentConfig config = curve_scenario.config(costs, pred);
      const Cell cell = make_cell(config, config.scenario.processors.front(), pred,
                                  costs.proactive_checkpoint / costs.checkpoint);
      const Heuristic heuristic = parse_heuristic(curve_heuristic);
      std::vector<double> grid;
      for (const auto& item : curve_grid) grid.push_back(parse_duration(item));
      if (grid.empty()) grid = default_grid(policy_period(reference_policy(heuristic, cell)), costs.checkpoint);
      const auto rows = emit_waste_curve(cell, heuristic, grid, config.instances, config.base_seed, workers);
      std::ofstream file;
      write_waste_curve_csv(open_output(curve_out, file), rows);
      const bool any_invalid = std::any_of(rows.begin(), rows.end(), [](const WasteCurveRow& r) { return !r.valid; });
      return any_invalid ? kExitPartial : kExitOk;
    }

    if (fta->parsed()) {
      const EmpiricalDurations durations = ingest_fta_durations(fta_file);
      const auto [lo, hi] = std::minmax_element(durations.samples.begin(), durations.samples.end());
      std::cout << "count," << durations.samples.size() << '\n'
                << "mean_s," << fmt(distribution_mean(durations)) << '\n'
                << "min_s," << fmt(*lo) << '\n'
                << "max_s," << fmt(*hi) << '\n';
      if (fta_survival.size() == 2) {
        std::cout << "conditional_survival,"
                  << fmt(empirical_conditional_survival(durations.samples, fta_survival[0], fta_survival[1])) << '\n';
      }
      return kExitOk;
    }

    if (exp->parsed()) {
      ExperimentConfig config = load_experiment_config(exp_config);
      if (exp_instances > 0) config.instances = exp_instances;
      exp_seed_given = seed_opt->count() > 0;
      if (exp_seed_given) config.base_seed = exp_seed;
      const ExperimentReport report = run_experiment(config, workers, &std::cerr);
      write_experiment(report, config, exp_out, exp_days);
      return report.errors.empty() ? kExitOk : kExitPartial;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
