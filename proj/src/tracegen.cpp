#include "ckpt/tracegen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace ckpt {

namespace {

void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<double> renewal_dates(Sampler& sampler, Rng& rng, double horizon) {
  std::vector<double> dates;
  double t = sampler(rng);
  while (t <= horizon) {
    dates.push_back(t);
    t += sampler(rng);
  }
  return dates;
}

}  // namespace

void validate(const DistributionSpec& dist) {
  std::visit(Overloaded{
                 [](const Exponential& d) { require(d.mean > 0.0 && std::isfinite(d.mean), "Exponential mean must be > 0"); },
                 [](const Weibull& d) {
                   require(d.mean > 0.0 && std::isfinite(d.mean), "Weibull mean must be > 0");
                   require(d.shape > 0.0 && std::isfinite(d.shape), "Weibull shape must be > 0");
                 },
                 [](const EmpiricalDurations& d) {
                   require(!d.samples.empty(), "empirical distribution needs at least one sample");
                   for (double s : d.samples) {
                     require(s > 0.0 && std::isfinite(s), "empirical durations must be positive and finite");
                   }
                 },
                 [](const UniformMean& d) { require(d.mean > 0.0 && std::isfinite(d.mean), "uniform mean must be > 0"); },
             },
             dist);
}

double distribution_mean(const DistributionSpec& dist) {
  return std::visit(Overloaded{
                        [](const Exponential& d) { return d.mean; },
                        [](const Weibull& d) { return d.mean; },
                        [](const EmpiricalDurations& d) {
                          if (d.samples.empty()) return 0.0;
                          return std::accumulate(d.samples.begin(), d.samples.end(), 0.0) /
                                 static_cast<double>(d.samples.size());
                        },
                        [](const UniformMean& d) { return d.mean; },
                    },
                    dist);
}

DistributionSpec with_mean(const DistributionSpec& dist, double mean) {
  require(mean > 0.0, "target mean must be > 0");
  return std::visit(Overloaded{
                        [&](const Exponential&) -> DistributionSpec { return Exponential{mean}; },
                        [&](const Weibull& d) -> DistributionSpec { return Weibull{d.shape, mean}; },
                        [&](const EmpiricalDurations& d) -> DistributionSpec {
                          const double factor = mean / distribution_mean(d);
                          EmpiricalDurations scaled = d;
                          for (double& s : scaled.samples) s *= factor;
                          return scaled;
                        },
                        [&](const UniformMean&) -> DistributionSpec { return UniformMean{mean}; },
                    },
                    dist);
}

std::string describe(const DistributionSpec& dist) {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const Exponential& d) { out << "exponential(mean=" << d.mean << ")"; },
                 [&](const Weibull& d) { out << "weibull(shape=" << d.shape << ", mean=" << d.mean << ")"; },
                 [&](const EmpiricalDurations& d) {
                   out << "empirical(n=" << d.samples.size() << ", mean=" << distribution_mean(d) << ")";
                 },
                 [&](const UniformMean& d) { out << "uniform(mean=" << d.mean << ")"; },
             },
             dist);
  return out.str();
}

Sampler::Sampler(const DistributionSpec& dist) {
  validate(dist);
  std::visit(Overloaded{
                 [&](const Exponential& d) { law_ = std::exponential_distribution<double>(1.0 / d.mean); },
                 [&](const Weibull& d) {
                   const double scale = d.mean / std::tgamma(1.0 + 1.0 / d.shape);
                   law_ = std::weibull_distribution<double>(d.shape, scale);
                 },
                 [&](const EmpiricalDurations& d) {
                   samples_ = d.samples;
                   law_ = std::uniform_int_distribution<std::size_t>(0, samples_.size() - 1);
                 },
                 [&](const UniformMean& d) { uniform_upper_ = 2.0 * d.mean; },
             },
             dist);
  if (uniform_upper_ > 0.0) law_ = std::uniform_real_distribution<double>(0.0, 1.0);
}

double Sampler::operator()(Rng& rng) {
  if (uniform_upper_ > 0.0) return uniform_upper_ * uniform_open_closed(rng);
  return std::visit(Overloaded{
                        [&](std::exponential_distribution<double>& d) { return d(rng); },
                        [&](std::weibull_distribution<double>& d) { return d(rng); },
                        [&](std::uniform_int_distribution<std::size_t>& d) { return samples_[d(rng)]; },
                        [&](std::uniform_real_distribution<double>& d) { return d(rng); },
                    },
                    law_);
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::UnpredictedFault: return "fault";
    case EventKind::TruePrediction: return "pred_true";
    case EventKind::FalsePrediction: return "pred_false";
  }
  return "unknown";
}

void EventTrace::validate() const {
  require(horizon > 0.0, "trace horizon must be > 0");
  require(job_start >= 0.0 && job_start < horizon, "job start must lie in [0, horizon)");
  double previous = 0.0;
  for (const Event& e : events) {
    require(e.time >= 0.0 && e.time <= horizon, "event time outside [0, horizon]");
    require(e.time >= previous, "events are not sorted by time");
    if (e.kind == EventKind::TruePrediction) {
      require(e.actual_fault_time >= e.time, "true prediction precedes its actual fault");
    }
    previous = e.time;
  }
}

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message), line_(line) {}

std::vector<double> gen_platform_fault_trace(const DistributionSpec& per_unit, std::int64_t n_units,
                                             double horizon, std::uint64_t seed) {
  require(n_units >= 1, "need at least one unit");
  require(horizon > 0.0, "horizon must be > 0");
  Sampler sampler(per_unit);
  Rng rng(seed);
  std::vector<double> faults;
  for (std::int64_t unit = 0; unit < n_units; ++unit) {
    double t = sampler(rng);
    while (t <= horizon) {
      faults.push_back(t);
      t += sampler(rng);
    }
  }
  std::sort(faults.begin(), faults.end());
  return faults;
}

double empirical_conditional_survival(const std::vector<double>& samples, double t, double tau) {
  require(tau >= 0.0 && t >= tau, "conditional survival needs t >= tau >= 0");
  const auto at_least = [&](double x) {
    return std::count_if(samples.begin(), samples.end(), [x](double s) { return s >= x; });
  };
  const auto base = at_least(tau);
  require(base > 0, "no sample reaches tau: conditional survival undefined");
  return static_cast<double>(at_least(t)) / static_cast<double>(base);
}

LabeledFaults label_predictions(const std::vector<double>& faults, double recall, std::uint64_t seed,
                                double inexact_window) {
  require(recall >= 0.0 && recall <= 1.0, "recall must lie in [0, 1]");
  require(inexact_window >= 0.0, "inexact window must be >= 0");
  Rng labels = make_rng(seed, Substream::Labeling);
  Rng offsets = make_rng(seed, Substream::InexactOffsets);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  LabeledFaults out;
  for (double t : faults) {
    if (unit(labels) < recall) {
      const double actual = inexact_window > 0.0 ? t + inexact_window * uniform_open_closed(offsets) : t;
      out.true_predictions.push_back({t, EventKind::TruePrediction, actual});
    } else {
      out.unpredicted.push_back(t);
    }
  }
  return out;
}

std::vector<Event> gen_false_predictions(const DistributionSpec& family, const PredictorParams& predictor,
                                         double platform_mtbf, double horizon, std::uint64_t seed) {
  predictor.validate();
  require(platform_mtbf > 0.0, "platform MTBF must be > 0");
  require(horizon > 0.0, "horizon must be > 0");
  const double r = predictor.recall;
  const double p = predictor.precision;
  if (p >= 1.0 || r <= 0.0) return {};

  Sampler sampler(with_mean(family, p * platform_mtbf / (r * (1.0 - p))));
  Rng rng(seed);
  std::vector<Event> out;
  for (double t : renewal_dates(sampler, rng, horizon)) out.push_back({t, EventKind::FalsePrediction, 0.0});
  return out;
}

EventTrace merge_events(const std::vector<double>& unpredicted, const std::vector<Event>& true_predictions,
                        const std::vector<Event>& false_predictions, double horizon, double job_start,
                        std::uint64_t seed) {
  EventTrace trace;
  trace.horizon = horizon;
  trace.job_start = job_start;
  trace.seed = seed;
  trace.events.reserve(unpredicted.size() + true_predictions.size() + false_predictions.size());
  for (double t : unpredicted) trace.events.push_back({t, EventKind::UnpredictedFault, 0.0});
  trace.events.insert(trace.events.end(), true_predictions.begin(), true_predictions.end());
  trace.events.insert(trace.events.end(), false_predictions.begin(), false_predictions.end());
  // Stable: equal (time, kind) keep their source order.
  std::stable_sort(trace.events.begin(), trace.events.end(), [](const Event& a, const Event& b) {
    if (a.time != b.time) return a.time < b.time;
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
  trace.validate();
  return trace;
}

double estimate_platform_mtbf(const std::vector<double>& fault_times) {
  if (fault_times.size() < 2) throw InvalidArgument("need at least two faults to estimate the MTBF");
  const auto [lo, hi] = std::minmax_element(fault_times.begin(), fault_times.end());
  return (*hi - *lo) / static_cast<double>(fault_times.size() - 1);
}

double TraceScenario::platform_mtbf() const {
  return distribution_mean(unit_distribution) / static_cast<double>(units);
}

EventTrace generate_trace(const TraceScenario& scenario, std::uint64_t seed) {
  scenario.predictor.validate();
  const auto faults = gen_platform_fault_trace(scenario.unit_distribution, scenario.units, scenario.horizon,
                                               substream_seed(seed, Substream::Faults));
  const auto labeled = label_predictions(faults, scenario.predictor.recall, seed, scenario.inexact_window);
  const auto false_predictions =
      gen_false_predictions(scenario.false_prediction_family.value_or(scenario.unit_distribution),
                            scenario.predictor, scenario.platform_mtbf(), scenario.horizon,
                            substream_seed(seed, Substream::FalsePredictions));
  return merge_events(labeled.unpredicted, labeled.true_predictions, false_predictions, scenario.horizon,
                      scenario.job_start, seed);
}

}  // namespace ckpt
