#pragma once

// Closed-form waste models and checkpoint-period optimization, with and
// without a fault predictor.
//
// Notation used in comments: mu is the platform MTBF, T the period, C / Cp the
// regular / proactive checkpoint durations, D the downtime, R the recovery
// time, r / p the predictor recall / precision.

#include "ckpt/model.hpp"

#include <string_view>

namespace ckpt {

// Waste split into its fault-free part (checkpointing) and its fault part,
// combined as total = ff + fault - ff * fault.
struct WasteBreakdown {
  double fault_free = 0.0;
  double fault = 0.0;
  double total = 0.0;
  // False when a component leaves [0, 1]: the first-order model is outside
  // its domain. Values are reported unclamped.
  bool valid = true;
};

WasteBreakdown compose_waste(double fault_free, double fault);

enum class Branch { NoPrediction, Prediction };
std::string_view to_string(Branch branch);

struct PeriodRecommendation {
  double period = 0.0;
  double predicted_waste = 0.0;
  Branch branch = Branch::NoPrediction;
  // True when `period` is a bound of the feasible range rather than the
  // interior extremum.
  bool clamped = false;
};

// Young: sqrt(2 mu C) + C.
double period_young(double mtbf, double checkpoint);
// Daly: sqrt(2 (mu + D + R) C) + C.
double period_daly(double mtbf, const CostParams& costs);
// Refined first order: sqrt(2 (mu - (D + R)) C). Requires mu > D + R.
double period_rfo(double mtbf, const CostParams& costs);

// Periodic checkpointing without prediction: ff = C/T, fault = (D + R + T/2)/mu.
WasteBreakdown waste_no_prediction(double period, double mtbf, const CostParams& costs);

// Exact expected makespan under Exponential faults:
// (mu + D) e^{R/mu} (e^{T/mu} - 1) T_base / (T - C).
double exact_exponential_makespan(double period, double mtbf, const CostParams& costs,
                                  double base_time);

// Minimizer of the exact Exponential makespan over T > C, found by golden
// section on [C + 1, 5 (sqrt(2 mu C) + C)] to 0.5 s. D and R only scale the
// makespan and do not move the minimizer.
double period_optimal_exponential(double mtbf, double checkpoint);

// Same minimizer through the Lambert function,
// C + mu (1 + W0(-e^{-C/mu - 1})). Diagnostic cross-check only.
double period_optimal_exponential_lambert(double mtbf, double checkpoint);

// Policy that trusts every usable prediction with probability q.
WasteBreakdown waste_simple_policy(double period, double trust_probability, double mtbf,
                                   const PredictorParams& predictor, const CostParams& costs);

// Break-even offset Cp/p: predictions earlier in the period are not worth a
// proactive checkpoint.
double beta_lim(const CostParams& costs, const PredictorParams& predictor);

// Waste_2(T) = u/T^2 + v/T + w + x T, valid for T >= Cp/p.
struct PredictionWasteCoefficients {
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
  double x = 0.0;

  double evaluate(double period) const { return u / (period * period) + v / period + w + x * period; }
};

PredictionWasteCoefficients prediction_waste_coefficients(double mtbf, const PredictorParams& predictor,
                                                          const CostParams& costs);

// Waste of the threshold-trust policy when T <= Cp/p (never trusts).
double waste_1(double period, double mtbf, const CostParams& costs);
// Waste of the threshold-trust policy when T >= Cp/p.
double waste_2(double period, double mtbf, const PredictorParams& predictor, const CostParams& costs);
// Piecewise combination of waste_1 and waste_2 split at Cp/p.
double waste_with_prediction(double period, double mtbf, const PredictorParams& predictor,
                             const CostParams& costs);

// max(C, min(T_RFO, Cp/p)).
double period_no_pred(double mtbf, const PredictorParams& predictor, const CostParams& costs);

struct PredictionPeriod {
  double period = 0.0;
  double extremum = 0.0;  // T_extr before clamping
  bool clamped = false;
};
// max(C, max(T_extr, Cp/p)) where T_extr minimizes Waste_2. Requires r < 1.
PredictionPeriod period_pred_detail(double mtbf, const PredictorParams& predictor, const CostParams& costs);
double period_pred(double mtbf, const PredictorParams& predictor, const CostParams& costs);

// Large-mu approximation sqrt(2 mu C / (1 - r)).
double period_pred_approx(double mtbf, double checkpoint, double recall);

// Picks the better of the no-prediction and the prediction regimes.
PeriodRecommendation optimize_period(double mtbf, const PredictorParams& predictor, const CostParams& costs);

}  // namespace ckpt
