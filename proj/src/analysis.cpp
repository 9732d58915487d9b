#include "ckpt/analysis.hpp"

#include "ckpt/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ckpt {

namespace {

void require(bool condition, const char* message) {
  if (!condition) throw InvalidArgument(message);
}

bool in_unit_interval(double value) { return value >= 0.0 && value <= 1.0; }

}  // namespace

WasteBreakdown compose_waste(double fault_free, double fault) {
  WasteBreakdown waste;
  waste.fault_free = fault_free;
  waste.fault = fault;
  waste.total = fault_free + fault - fault_free * fault;
  waste.valid = in_unit_interval(fault_free) && in_unit_interval(fault) && in_unit_interval(waste.total);
  return waste;
}

std::string_view to_string(Branch branch) {
  return branch == Branch::Prediction ? "prediction" : "no-prediction";
}

double period_young(double mtbf, double checkpoint) {
  require(mtbf > 0.0, "MTBF must be > 0");
  require(checkpoint >= 0.0, "checkpoint duration must be >= 0");
  return std::sqrt(2.0 * mtbf * checkpoint) + checkpoint;
}

double period_daly(double mtbf, const CostParams& costs) {
  require(mtbf > 0.0, "MTBF must be > 0");
  const double c = costs.checkpoint;
  return std::sqrt(2.0 * (mtbf + costs.downtime_plus_recovery()) * c) + c;
}

double period_rfo(double mtbf, const CostParams& costs) {
  require(mtbf > costs.downtime_plus_recovery(), "RFO period requires MTBF > D + R");
  return std::sqrt(2.0 * (mtbf - costs.downtime_plus_recovery()) * costs.checkpoint);
}

WasteBreakdown waste_no_prediction(double period, double mtbf, const CostParams& costs) {
  costs.validate();
  require(mtbf > 0.0, "MTBF must be > 0");
  require(period >= costs.checkpoint, "period must be >= C");
  const double fault_free = costs.checkpoint / period;
  const double fault = (costs.downtime_plus_recovery() + period / 2.0) / mtbf;
  return compose_waste(fault_free, fault);
}

double exact_exponential_makespan(double period, double mtbf, const CostParams& costs, double base_time) {
  require(mtbf > 0.0, "MTBF must be > 0");
  require(base_time > 0.0, "base time must be > 0");
  require(period > costs.checkpoint, "exact makespan requires T > C");
  return (mtbf + costs.downtime) * std::exp(costs.recovery / mtbf) * std::expm1(period / mtbf) *
         base_time / (period - costs.checkpoint);
}

double period_optimal_exponential(double mtbf, double checkpoint) {
  require(mtbf > 0.0, "MTBF must be > 0");
  require(checkpoint > 0.0, "checkpoint duration must be > 0");
  require(checkpoint < mtbf, "optimal Exponential period requires C < mu");
  // Makespan up to constant factors; its relative curvature at the optimum
  // is ~1e-12 per s^2 at large mu, so 0.05 s sits just above rounding noise.
  auto objective = [=](double t) { return std::expm1(t / mtbf) / (t - checkpoint); };
  const double lo = checkpoint + 1.0;
  const double hi = 5.0 * (std::sqrt(2.0 * mtbf * checkpoint) + checkpoint);
  const double best = numeric::golden_section_minimize(objective, lo, hi, 0.05);
  if (best - lo < 0.5 || hi - best < 0.5) {
    throw numeric::NonConvergence("optimal Exponential period: minimizer on the bracket boundary");
  }
  return best;
}

double period_optimal_exponential_lambert(double mtbf, double checkpoint) {
  require(mtbf > 0.0, "MTBF must be > 0");
  require(checkpoint > 0.0, "checkpoint duration must be > 0");
  const double w = numeric::lambert_w0(-std::exp(-checkpoint / mtbf - 1.0));
  return checkpoint + mtbf * (1.0 + w);
}

WasteBreakdown waste_simple_policy(double period, double trust_probability, double mtbf,
                                   const PredictorParams& predictor, const CostParams& costs) {
  costs.validate();
  predictor.validate();
  require(mtbf > 0.0, "MTBF must be > 0");
  require(trust_probability >= 0.0 && trust_probability <= 1.0, "trust probability q must lie in [0, 1]");
  require(period >= std::max(costs.checkpoint, costs.proactive_checkpoint), "period must be >= max(C, Cp)");

  const double q = trust_probability;
  const double r = predictor.recall;
  const double p = predictor.precision;
  const double cp = costs.proactive_checkpoint;
  const double fault = ((1.0 - r * q) * period / 2.0 + costs.downtime_plus_recovery() + q * r / p * cp -
                        q * r * cp * cp / (p * period) * (1.0 - p / 2.0)) /
                       mtbf;
  return compose_waste(costs.checkpoint / period, fault);
}

double beta_lim(const CostParams& costs, const PredictorParams& predictor) {
  require(predictor.precision > 0.0, "precision must be > 0");
  return costs.proactive_checkpoint / predictor.precision;
}

PredictionWasteCoefficients prediction_waste_coefficients(double mtbf, const PredictorParams& predictor,
                                                          const CostParams& costs) {
  costs.validate();
  predictor.validate();
  require(mtbf > 0.0, "MTBF must be > 0");
  const double r = predictor.recall;
  const double p = predictor.precision;
  const double c = costs.checkpoint;
  const double cp = costs.proactive_checkpoint;
  const double dr = costs.downtime_plus_recovery();
  const double false_alarm_term = r * cp * cp / (2.0 * mtbf * p * p);

  PredictionWasteCoefficients k;
  k.u = c * false_alarm_term;
  k.v = c * (1.0 - (r * cp / p + dr) / mtbf) - false_alarm_term;
  k.w = (-(1.0 - r) * c / 2.0 + r * cp / p + dr) / mtbf;
  k.x = (1.0 - r) / (2.0 * mtbf);
  return k;
}

double waste_1(double period, double mtbf, const CostParams& costs) {
  require(mtbf > 0.0, "MTBF must be > 0");
  const double c = costs.checkpoint;
  const double dr = costs.downtime_plus_recovery();
  return c * (1.0 - dr / mtbf) / period + (dr - c / 2.0) / mtbf + period / (2.0 * mtbf);
}

double waste_2(double period, double mtbf, const PredictorParams& predictor, const CostParams& costs) {
  return prediction_waste_coefficients(mtbf, predictor, costs).evaluate(period);
}

double waste_with_prediction(double period, double mtbf, const PredictorParams& predictor,
                             const CostParams& costs) {
  costs.validate();
  predictor.validate();
  require(period >= costs.checkpoint, "period must be >= C");
  if (period <= beta_lim(costs, predictor)) return waste_1(period, mtbf, costs);
  return waste_2(period, mtbf, predictor, costs);
}

double period_no_pred(double mtbf, const PredictorParams& predictor, const CostParams& costs) {
  costs.validate();
  predictor.validate();
  const double rfo = period_rfo(mtbf, costs);
  return std::max(costs.checkpoint, std::min(rfo, beta_lim(costs, predictor)));
}

PredictionPeriod period_pred_detail(double mtbf, const PredictorParams& predictor, const CostParams& costs) {
  require(predictor.recall < 1.0, "prediction period undefined for r = 1 (no periodic regime)");
  const PredictionWasteCoefficients k = prediction_waste_coefficients(mtbf, predictor, costs);
  const double lower = std::max(costs.checkpoint, beta_lim(costs, predictor));

  // Stationary points of Waste_2 are the positive roots of x T^3 - v T - 2u.
  auto cubic = [&](double t) { return (k.x * t * t - k.v) * t - 2.0 * k.u; };
  auto cubic_slope = [&](double t) { return 3.0 * k.x * t * t - k.v; };

  PredictionPeriod result;
  if (k.v >= 0.0) {
    double extremum = 0.0;
    if (k.u > 0.0 || k.v > 0.0) {
      const double hi = std::max(10.0 * std::sqrt(k.v / k.x + 1.0), 10.0 * std::cbrt(2.0 * k.u / k.x));
      double lo = hi * 1e-12;
      while (cubic(lo) >= 0.0 && lo > std::numeric_limits<double>::min()) lo *= 1e-3;
      extremum = numeric::bracketed_root(cubic, cubic_slope, lo, hi, 1e-12);
    }
    result.extremum = extremum;
    result.period = std::max(lower, extremum);
    result.clamped = extremum < lower;
    return result;
  }

  // v < 0: Waste_2 need not be convex; compare every admissible stationary
  // point with the lower bound.
  double best = lower;
  double best_waste = k.evaluate(lower);
  result.extremum = lower;
  for (double root : numeric::cubic_real_roots(k.x, 0.0, -k.v, -2.0 * k.u)) {
    if (root <= 0.0) continue;
    result.extremum = root;
    if (root < lower) continue;
    const double value = k.evaluate(root);
    if (value < best_waste) {
      best = root;
      best_waste = value;
    }
  }
  result.period = best;
  result.clamped = best == lower;
  return result;
}

double period_pred(double mtbf, const PredictorParams& predictor, const CostParams& costs) {
  return period_pred_detail(mtbf, predictor, costs).period;
}

double period_pred_approx(double mtbf, double checkpoint, double recall) {
  require(mtbf > 0.0, "MTBF must be > 0");
  require(recall >= 0.0 && recall < 1.0, "approximation requires 0 <= r < 1");
  return std::sqrt(2.0 * mtbf * checkpoint / (1.0 - recall));
}

PeriodRecommendation optimize_period(double mtbf, const PredictorParams& predictor, const CostParams& costs) {
  costs.validate();
  predictor.validate();
  const double rfo = period_rfo(mtbf, costs);

  PeriodRecommendation rec;
  if (predictor.recall == 0.0) {
    // Both waste pieces coincide, so the Cp/p cap on the no-prediction
    // period does not apply.
    rec.branch = Branch::NoPrediction;
    rec.period = std::max(costs.checkpoint, rfo);
    rec.clamped = rec.period != rfo;
    rec.predicted_waste = waste_1(rec.period, mtbf, costs);
    return rec;
  }

  const double no_pred = period_no_pred(mtbf, predictor, costs);
  const double no_pred_waste = waste_1(no_pred, mtbf, costs);
  const PredictionPeriod pred = period_pred_detail(mtbf, predictor, costs);
  const double pred_waste = waste_2(pred.period, mtbf, predictor, costs);

  if (pred_waste <= no_pred_waste) {
    rec.branch = Branch::Prediction;
    rec.period = pred.period;
    rec.predicted_waste = pred_waste;
    rec.clamped = pred.clamped;
  } else {
    rec.branch = Branch::NoPrediction;
    rec.period = no_pred;
    rec.predicted_waste = no_pred_waste;
    rec.clamped = no_pred != rfo;
  }
  return rec;
}

}  // namespace ckpt
