#include "ckpt/model.hpp"

#include <cmath>
#include <sstream>

namespace ckpt {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw InvalidArgument(message);
}

}  // namespace

void CostParams::validate() const {
  require(std::isfinite(checkpoint) && std::isfinite(proactive_checkpoint) &&
              std::isfinite(downtime) && std::isfinite(recovery),
          "cost parameters must be finite");
  require(checkpoint > 0.0, "checkpoint duration C must be > 0");
  require(proactive_checkpoint >= 0.0, "proactive checkpoint duration Cp must be >= 0");
  require(downtime >= 0.0, "downtime D must be >= 0");
  require(recovery >= 0.0, "recovery R must be >= 0");
}

void PredictorParams::validate() const {
  require(recall >= 0.0 && recall <= 1.0, "recall must lie in [0, 1]");
  require(precision > 0.0 && precision <= 1.0, "precision must lie in (0, 1]");
}

void PlatformParams::validate() const {
  require(processors >= 1, "platform needs at least one processor");
  require(individual_mtbf > 0.0 && std::isfinite(individual_mtbf),
          "individual MTBF must be positive and finite");
}

double mu_platform(const PlatformParams& platform) {
  platform.validate();
  return platform.individual_mtbf / static_cast<double>(platform.processors);
}

EventRates derive_rates(double platform_mtbf, const PredictorParams& predictor) {
  require(platform_mtbf > 0.0, "platform MTBF must be > 0");
  predictor.validate();
  const double r = predictor.recall;
  const double p = predictor.precision;

  EventRates rates;
  rates.platform_mtbf = platform_mtbf;
  rates.unpredicted_faults_mtbf = r < 1.0 ? platform_mtbf / (1.0 - r) : kInfinity;
  rates.predicted_events_mtbf = r > 0.0 ? p * platform_mtbf / r : kInfinity;

  // 1/mu_e = 1/mu_P + 1/mu_NP with 1/inf = 0. At least one stream is finite.
  const double event_rate = 1.0 / rates.predicted_events_mtbf + 1.0 / rates.unpredicted_faults_mtbf;
  rates.all_events_mtbf = 1.0 / event_rate;
  return rates;
}

double multi_fault_probability(double period, double platform_mtbf) {
  require(period >= 0.0, "period must be >= 0");
  require(platform_mtbf > 0.0, "platform MTBF must be > 0");
  const double beta = period / platform_mtbf;
  // 1 - (1 + beta) e^-beta, written to keep precision for small beta.
  const double value = -std::expm1(-beta) - beta * std::exp(-beta);
  return value < 0.0 ? 0.0 : value;
}

AdmissibleInterval admissible_interval(const CostParams& costs, double reference_mtbf, double alpha) {
  costs.validate();
  require(alpha > 0.0, "alpha must be > 0");
  require(reference_mtbf > 0.0, "reference MTBF must be > 0");
  AdmissibleInterval interval;
  interval.alpha = alpha;
  interval.lower = costs.checkpoint;
  interval.upper = alpha * reference_mtbf;
  interval.checkpoint_within_cap = costs.checkpoint <= interval.upper;
  interval.downtime_recovery_within_cap = costs.downtime_plus_recovery() <= interval.upper;
  return interval;
}

std::string to_string(const CostParams& costs) {
  std::ostringstream out;
  out << "C=" << costs.checkpoint << " Cp=" << costs.proactive_checkpoint
      << " D=" << costs.downtime << " R=" << costs.recovery;
  return out.str();
}

}  // namespace ckpt
