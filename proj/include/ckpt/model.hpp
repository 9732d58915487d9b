#pragma once

// Shared domain parameters and the fault-rate algebra of a platform with a
// fault predictor. All durations are in seconds.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace ckpt {

inline constexpr double kSecondsPerMinute = 60.0;
inline constexpr double kSecondsPerHour = 3600.0;
inline constexpr double kSecondsPerDay = 86400.0;
// 365-day year: 125 y / 2^10 = 3,849,609 s.
inline constexpr double kSecondsPerYear = 365.0 * kSecondsPerDay;

inline constexpr double kDefaultAlpha = 0.27;
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CostParams {
  double checkpoint = 0.0;            // C
  double proactive_checkpoint = 0.0;  // Cp
  double downtime = 0.0;              // D
  double recovery = 0.0;              // R

  double downtime_plus_recovery() const { return downtime + recovery; }
  // Throws InvalidArgument unless C > 0, Cp, D, R >= 0 and all finite.
  void validate() const;
};

struct PredictorParams {
  double recall = 0.0;     // r in [0, 1]
  double precision = 1.0;  // p in (0, 1]

  void validate() const;
};

struct PlatformParams {
  std::int64_t processors = 1;  // N
  double individual_mtbf = 0.0; // mu_ind

  void validate() const;
};

// Mean times between: all faults (mu), predictions true or false (mu_P),
// unpredicted faults (mu_NP) and events of any kind (mu_e). Infinite when the
// corresponding stream is empty.
struct EventRates {
  double platform_mtbf = 0.0;
  double predicted_events_mtbf = kInfinity;
  double unpredicted_faults_mtbf = kInfinity;
  double all_events_mtbf = 0.0;
};

struct AdmissibleInterval {
  double lower = 0.0;
  double upper = 0.0;
  double alpha = kDefaultAlpha;
  bool checkpoint_within_cap = false;         // C <= alpha * mu_ref
  bool downtime_recovery_within_cap = false;  // D + R <= alpha * mu_ref

  bool empty() const { return lower > upper; }
  bool contains(double period) const { return !empty() && period >= lower && period <= upper; }
};

double mu_platform(const PlatformParams& platform);

EventRates derive_rates(double platform_mtbf, const PredictorParams& predictor);

// Poisson probability of two or more faults within a window of length `period`.
double multi_fault_probability(double period, double platform_mtbf);

AdmissibleInterval admissible_interval(const CostParams& costs, double reference_mtbf,
                                       double alpha = kDefaultAlpha);

std::string to_string(const CostParams& costs);

}  // namespace ckpt
