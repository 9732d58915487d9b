#pragma once

// Failure traces: per-unit renewal processes, prediction labeling, false
// prediction streams and the merged event trace consumed by the simulator.

#include "ckpt/model.hpp"
#include "ckpt/rng.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ckpt {

struct Exponential {
  double mean = 0.0;
};

// Scale is mean / Gamma(1 + 1/shape).
struct Weibull {
  double shape = 0.0;
  double mean = 0.0;
};

// Draws uniformly from the recorded availability intervals.
struct EmpiricalDurations {
  std::vector<double> samples;
};

// Uniform on (0, 2 * mean].
struct UniformMean {
  double mean = 0.0;
};

using DistributionSpec = std::variant<Exponential, Weibull, EmpiricalDurations, UniformMean>;

void validate(const DistributionSpec& dist);
double distribution_mean(const DistributionSpec& dist);
// Same family, scaled so that its mean becomes `mean`.
DistributionSpec with_mean(const DistributionSpec& dist, double mean);
std::string describe(const DistributionSpec& dist);

class Sampler {
 public:
  explicit Sampler(const DistributionSpec& dist);
  double operator()(Rng& rng);

 private:
  std::variant<std::exponential_distribution<double>, std::weibull_distribution<double>,
               std::uniform_int_distribution<std::size_t>, std::uniform_real_distribution<double>>
      law_;
  std::vector<double> samples_;
  double uniform_upper_ = 0.0;
};

enum class EventKind { UnpredictedFault = 0, TruePrediction = 1, FalsePrediction = 2 };
std::string_view to_string(EventKind kind);

struct Event {
  double time = 0.0;
  EventKind kind = EventKind::UnpredictedFault;
  // When the predicted fault actually strikes; meaningful for TruePrediction only.
  double actual_fault_time = 0.0;
};

struct EventTrace {
  std::vector<Event> events;
  double horizon = 0.0;
  double job_start = 0.0;
  std::uint64_t seed = 0;

  // Throws InvalidArgument on unsorted events, times outside [0, horizon],
  // true predictions whose fault precedes them, or job_start >= horizon.
  void validate() const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Renewal process per unit from time 0, all units merged and sorted.
std::vector<double> gen_platform_fault_trace(const DistributionSpec& per_unit, std::int64_t n_units,
                                             double horizon, std::uint64_t seed);

EmpiricalDurations parse_fta_durations(std::istream& in, const std::string& source_name = "<stream>");
EmpiricalDurations ingest_fta_durations(const std::filesystem::path& path);

// P(X >= t | X >= tau) as a ratio of counts.
double empirical_conditional_survival(const std::vector<double>& samples, double t, double tau);

struct LabeledFaults {
  std::vector<Event> true_predictions;
  std::vector<double> unpredicted;
};

// Each fault is predicted with probability `recall`. With a positive
// `inexact_window` the prediction keeps the fault date and the actual fault is
// moved to a uniform point of (t, t + inexact_window]; offsets come from their
// own substream so labels do not depend on the window.
LabeledFaults label_predictions(const std::vector<double>& faults, double recall, std::uint64_t seed,
                                double inexact_window = 0.0);

// Platform-level renewal stream of false predictions with mean inter-arrival
// p * mu / (r * (1 - p)). Empty when p = 1 or r = 0.
std::vector<Event> gen_false_predictions(const DistributionSpec& family, const PredictorParams& predictor,
                                         double platform_mtbf, double horizon, std::uint64_t seed);

// Sorted by time, then kind (unpredicted < true < false), then source order.
EventTrace merge_events(const std::vector<double>& unpredicted, const std::vector<Event>& true_predictions,
                        const std::vector<Event>& false_predictions, double horizon, double job_start,
                        std::uint64_t seed = 0);

// Mean gap between successive fault dates.
double estimate_platform_mtbf(const std::vector<double>& fault_times);

// Everything needed to draw one instance of a platform trace.
struct TraceScenario {
  DistributionSpec unit_distribution = Exponential{};
  std::int64_t units = 1;
  PredictorParams predictor;
  // Inter-arrival family of false predictions; defaults to the unit family.
  std::optional<DistributionSpec> false_prediction_family;
  double horizon = 0.0;
  double job_start = 0.0;
  double inexact_window = 0.0;

  double platform_mtbf() const;
};

EventTrace generate_trace(const TraceScenario& scenario, std::uint64_t seed);

// CSV with header `time_s,kind,actual_fault_time_s`, preceded by `#` lines
// carrying horizon, job start and seed.
void write_trace_csv(std::ostream& out, const EventTrace& trace);
EventTrace read_trace_csv(std::istream& in, const std::string& source_name = "<stream>");

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

}  // namespace ckpt
