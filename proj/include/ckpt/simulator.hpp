#pragma once

// Discrete-event execution of a job under a checkpointing policy against an
// event trace.
//
// Work runs in periods of T - C useful seconds, each closed by a regular
// checkpoint of length C. A trusted prediction turns the last Cp seconds of
// the running work segment into a proactive checkpoint that completes at the
// predicted date. Faults roll back to the last checkpoint and cost D + R.

#include "ckpt/analysis.hpp"
#include "ckpt/model.hpp"
#include "ckpt/tracegen.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ckpt {

struct Periodic {
  double period = 0.0;
};

// Trusts a usable prediction iff it arrives at least `threshold` seconds into
// the current work segment.
struct ThresholdTrust {
  double period = 0.0;
  double threshold = 0.0;
};

struct RandomTrust {
  double period = 0.0;
  double trust_probability = 0.0;
};

struct TrustInterval {
  double lower = 0.0;
  double upper = 0.0;
  double trust_probability = 0.0;
};

// Intervals partition [Cp, T]; a prediction at offset s is trusted with the
// probability of the interval containing s.
struct PiecewiseTrust {
  double period = 0.0;
  std::vector<TrustInterval> intervals;
};

// Threshold trust meant for traces whose faults trail their prediction.
struct Inexact {
  double period = 0.0;
  double threshold = 0.0;
};

using Policy = std::variant<Periodic, ThresholdTrust, RandomTrust, PiecewiseTrust, Inexact>;

double policy_period(const Policy& policy);
std::string describe(const Policy& policy);
void validate(const Policy& policy, const CostParams& costs);

struct SimCounts {
  std::int64_t unpredicted_faults_hit = 0;
  std::int64_t trusted_predictions = 0;
  std::int64_t ignored_predictions = 0;
  std::int64_t false_alarms_paid = 0;
  std::int64_t periodic_ckpts = 0;
  std::int64_t proactive_ckpts = 0;
  std::int64_t rollbacks = 0;
};

// Where the time went. Sums to the makespan.
struct TimeLedger {
  double useful = 0.0;
  double checkpoint = 0.0;
  double lost = 0.0;
  double downtime = 0.0;
  double recovery = 0.0;

  double total() const { return useful + checkpoint + lost + downtime + recovery; }
};

struct SimOutcome {
  double makespan = 0.0;
  double waste = 0.0;
  SimCounts counts;
  TimeLedger ledger;
};

class HorizonExhausted : public std::runtime_error {
 public:
  HorizonExhausted(double committed_work, double base_time, double reached);
  double committed_work() const { return committed_work_; }
  double base_time() const { return base_time_; }

 private:
  double committed_work_;
  double base_time_;
};

SimOutcome simulate(const EventTrace& trace, const Policy& policy, const CostParams& costs, double base_time,
                    std::uint64_t rng_seed = 0);

// ThresholdTrust at the optimized period with threshold Cp/p, or Periodic when
// ignoring the predictor is better.
Policy optimal_prediction_policy(double mtbf, const PredictorParams& predictor, const CostParams& costs);
// Same period and threshold, as an Inexact policy.
Policy inexact_prediction_policy(double mtbf, const PredictorParams& predictor, const CostParams& costs);

SimOutcome run_optimal_prediction(const EventTrace& trace, double mtbf, const PredictorParams& predictor,
                                  const CostParams& costs, double base_time, std::uint64_t rng_seed = 0);

// (T_final - T_base) / T_final.
double waste_of(double makespan, double base_time);

}  // namespace ckpt
