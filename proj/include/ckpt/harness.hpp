#pragma once

// Experiment configuration, sweeps over platform size, predictor and
// proactive-checkpoint cost, and CSV emission.

#include "ckpt/config.hpp"
#include "ckpt/search.hpp"
#include "ckpt/simulator.hpp"
#include "ckpt/tracegen.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ckpt {

enum class Heuristic {
  Young,
  Daly,
  Rfo,
  OptimalPrediction,
  InexactPrediction,
  BestPeriodic,
  BestPrediction,
  BestInexact,
};

std::string_view to_string(Heuristic heuristic);
Heuristic parse_heuristic(std::string_view name);

enum class FalsePredictionLaw { Auto, Same, Uniform };

struct ScenarioConfig {
  std::string id = "scenario";
  // Per-unit law; synthetic laws are rescaled to individual_mtbf.
  DistributionSpec unit_family = Exponential{1.0};
  bool log_based = false;  // one unit per 4-processor node, empirical law
  double individual_mtbf = 125.0 * kSecondsPerYear;
  std::vector<std::int64_t> processors;
  double horizon = 2.0 * kSecondsPerYear;
  double job_start = kSecondsPerYear;
  double years_per_platform = 10000.0;
  FalsePredictionLaw false_predictions = FalsePredictionLaw::Auto;
};

struct ExperimentConfig {
  ScenarioConfig scenario;
  std::vector<double> recalls{0.85};
  std::vector<double> precisions{0.82};
  CostParams costs{600.0, 600.0, 60.0, 600.0};  // proactive_checkpoint is overridden by the ratios
  std::vector<double> proactive_ratios{1.0};
  std::vector<Heuristic> heuristics;
  int instances = 100;
  std::uint64_t base_seed = 1;
  int search_rounds = 2;

  void validate() const;
};

ExperimentConfig parse_experiment_config(const ConfigFile& file, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

// Parses "exp", "exponential", "weibull:K", "uniform" or "fta:PATH" into a
// unit law with mean `mean` (ignored for fta, whose mean comes from the file).
DistributionSpec parse_distribution(std::string_view text, double mean, bool* log_based = nullptr);

// One point of the sweep: platform size, predictor and proactive cost.
struct Cell {
  std::string scenario;
  std::int64_t processors = 0;
  PredictorParams predictor;
  CostParams costs;
  double platform_mtbf = 0.0;
  double base_time = 0.0;
  TraceScenario traces;  // exact-prediction traces; inexact ones widen the window to 2C
};

std::vector<Cell> expand_cells(const ExperimentConfig& config);
Cell make_cell(const ExperimentConfig& config, std::int64_t processors, const PredictorParams& predictor,
               double proactive_ratio);

// Policy a heuristic runs with in a cell; for the best-period heuristics this
// is the analytical reference injected into the search grid.
Policy reference_policy(Heuristic heuristic, const Cell& cell);
// Policy as a function of the period, threshold fixed at min(Cp/p, T).
PolicyFamily policy_family(Heuristic heuristic, const Cell& cell);
bool uses_inexact_traces(Heuristic heuristic);
// Traces of a heuristic: exact, or with faults trailing predictions by up to 2C.
TraceScenario traces_for(Heuristic heuristic, const Cell& cell);

// Instance i of a cell uses the trace drawn from instance_seed(base_seed, i).
std::vector<EventTrace> generate_traces(const TraceScenario& scenario, std::uint64_t base_seed, int instances,
                                        int workers = 1);

struct ResultRow {
  std::string scenario;
  std::int64_t processors = 0;
  Heuristic heuristic = Heuristic::Rfo;
  double period = 0.0;
  double mean_waste = 0.0;
  double waste_stderr = 0.0;
  double mean_makespan = 0.0;
  double gain_vs_rfo_percent = 0.0;  // NaN when the RFO baseline is unavailable
  int instances = 0;
};

struct ErrorRow {
  std::string scenario;
  std::int64_t processors = 0;
  std::string heuristic;
  int instance = -1;  // -1 when the failure is not tied to one instance
  std::string message;
};

struct PeriodRow {
  std::int64_t processors = 0;
  double platform_mtbf = 0.0;
  double young = 0.0;
  double daly = 0.0;
  double rfo = 0.0;
  double optimal = 0.0;

  double deviation_percent(double period) const { return 100.0 * (period - optimal) / optimal; }
};

struct ExperimentReport {
  std::vector<ResultRow> results;
  std::vector<PeriodRow> periods;
  std::vector<ErrorRow> errors;
};

PeriodRow period_row(std::int64_t processors, double individual_mtbf, const CostParams& costs);

// Simulates every heuristic of every cell. `log` receives one line per cell.
ExperimentReport run_experiment(const ExperimentConfig& config, int workers, std::ostream* log = nullptr);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool days = false);
void write_periods_csv(std::ostream& out, const std::vector<PeriodRow>& rows);
void write_errors_csv(std::ostream& out, const std::vector<ErrorRow>& rows);
// Writes results.csv, periods.csv (Exponential scenarios) and errors.csv.
void write_experiment(const ExperimentReport& report, const ExperimentConfig& config,
                      const std::filesystem::path& out_dir, bool days = false);

struct WasteCurveRow {
  double period = 0.0;
  bool valid = false;
  double analytical = 0.0;
  double simulated_mean = 0.0;
  double simulated_stderr = 0.0;
  int instances = 0;
};

// Pairs the closed-form waste with simulated means along a period grid.
// Periodic uses the no-prediction waste; the prediction heuristics use the
// threshold-trust waste with threshold Cp/p.
std::vector<WasteCurveRow> emit_waste_curve(const Cell& cell, Heuristic heuristic, const std::vector<double>& grid,
                                            int instances, std::uint64_t base_seed, int workers = 1);
void write_waste_curve_csv(std::ostream& out, const std::vector<WasteCurveRow>& rows);

}  // namespace ckpt
