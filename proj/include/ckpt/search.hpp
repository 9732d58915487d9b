#pragma once

// Brute-force search for the fixed period that minimizes simulated mean waste
// of a policy family. Every candidate is evaluated on the same traces.

#include "ckpt/simulator.hpp"

#include <functional>
#include <vector>

namespace ckpt {

struct SearchSpec {
  std::vector<double> grid;  // strictly increasing, all >= C
  int instances_per_candidate = 100;
  int refinement_rounds = 2;

  void validate(const CostParams& costs) const;
};

struct CandidateScore {
  double period = 0.0;
  double mean_waste = 0.0;
  double waste_stderr = 0.0;
  double mean_makespan = 0.0;
  int completed = 0;  // instances that finished within the trace horizon
};

struct SearchResult {
  double period = 0.0;
  double mean_waste = 0.0;
  double waste_stderr = 0.0;
  double mean_makespan = 0.0;
  std::vector<CandidateScore> evaluated;  // in evaluation order
};

using PolicyFamily = std::function<Policy(double period)>;

// 30 geometric points over [max(C, reference/10), 10 * reference] plus the
// reference itself.
std::vector<double> default_grid(double reference, double checkpoint, int points = 30);

// Scores one period on every trace. A period <= C never makes progress and
// scores waste 1; a candidate whose run outlives a trace scores waste 1 too.
CandidateScore evaluate_period(const PolicyFamily& family, double period, const std::vector<EventTrace>& traces,
                               const CostParams& costs, double base_time, int workers = 1);

// Uses the first spec.instances_per_candidate traces. Refinement re-grids
// between the incumbent's neighbours with ten times finer spacing. Ties go
// to the smaller period.
SearchResult best_period(const PolicyFamily& family, const std::vector<EventTrace>& traces,
                         const CostParams& costs, double base_time, const SearchSpec& spec, int workers = 1);

// Runs `task(i)` for i in [0, count) on up to `workers` threads.
void parallel_for(int count, int workers, const std::function<void(int)>& task);

// CKPT_WORKERS when set to a positive integer, else the hardware concurrency.
int default_workers();

}  // namespace ckpt
