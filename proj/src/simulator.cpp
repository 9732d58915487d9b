#include "ckpt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ckpt {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool condition, const std::string& message) {
  if (!condition) throw InvalidArgument(message);
}

// A true prediction expands into a prediction and a fault; the prediction
// sorts first when both share a date.
struct SimEvent {
  double time = 0.0;
  bool is_prediction = false;
  bool is_true = false;
};

std::vector<SimEvent> expand_events(const EventTrace& trace) {
  std::vector<SimEvent> out;
  out.reserve(trace.events.size() * 2);
  auto keep = [&](double t) { return t >= trace.job_start && t <= trace.horizon; };
  for (const Event& e : trace.events) {
    switch (e.kind) {
      case EventKind::UnpredictedFault:
        if (keep(e.time)) out.push_back({e.time, false, false});
        break;
      case EventKind::TruePrediction:
        if (keep(e.time)) out.push_back({e.time, true, true});
        if (keep(e.actual_fault_time)) out.push_back({e.actual_fault_time, false, true});
        break;
      case EventKind::FalsePrediction:
        if (keep(e.time)) out.push_back({e.time, true, false});
        break;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const SimEvent& a, const SimEvent& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.is_prediction && !b.is_prediction;
  });
  return out;
}

enum class Activity { Work, Checkpoint, Downtime, Recovery };

class Machine {
 public:
  Machine(const Policy& policy, const CostParams& costs, double base_time, double start, double horizon,
          std::uint64_t seed)
      : policy_(policy),
        period_(policy_period(policy)),
        costs_(costs),
        base_(base_time),
        start_(start),
        horizon_(horizon),
        rng_(make_rng(seed, Substream::Policy)) {
    start_work(start, false);
  }

  bool done() const { return done_; }

  void advance_to(double t) {
    while (!done_ && activity_end_ <= t) {
      if (activity_end_ > horizon_) throw HorizonExhausted(committed_, base_, horizon_);
      complete();
    }
  }

  void on_fault(double now, bool predicted) {
    if (!predicted) ++counts_.unpredicted_faults_hit;
    switch (activity_) {
      case Activity::Work: {
        const double lost = now - seg_start_;
        // A fault right at the end of a proactive checkpoint loses nothing and
        // the period carries on afterwards.
        if (!(lost == 0.0 && resume_partial_)) roll_back(lost);
        break;
      }
      case Activity::Checkpoint:
        roll_back(pending_ + (now - activity_start_));
        pending_ = 0.0;
        break;
      case Activity::Downtime:
      case Activity::Recovery:
        ledger_.lost += now - activity_start_;
        break;
    }
    begin(Activity::Downtime, now, costs_.downtime);
  }

  void on_prediction(double now, bool is_true) {
    if (activity_ != Activity::Work) {
      ++counts_.ignored_predictions;
      return;
    }
    const double offset = now - seg_start_;
    if (offset < costs_.proactive_checkpoint || !trust(offset)) {
      ++counts_.ignored_predictions;
      return;
    }
    const double saved = offset - costs_.proactive_checkpoint;
    committed_ += saved;
    work_left_ -= saved;
    ledger_.checkpoint += costs_.proactive_checkpoint;
    ++counts_.trusted_predictions;
    ++counts_.proactive_ckpts;
    if (!is_true) ++counts_.false_alarms_paid;
    seg_start_ = now;
    resume_partial_ = true;
    begin(Activity::Work, now, work_left_);
  }

  SimOutcome outcome() const {
    SimOutcome out;
    out.makespan = finish_ - start_;
    out.waste = waste_of(out.makespan, base_);
    out.counts = counts_;
    out.ledger = ledger_;
    out.ledger.useful = committed_;
    return out;
  }

 private:
  void begin(Activity activity, double now, double length) {
    activity_ = activity;
    activity_start_ = now;
    activity_end_ = now + length;
  }

  void start_work(double now, bool partial) {
    if (!partial) work_left_ = std::min(period_ - costs_.checkpoint, base_ - committed_);
    seg_start_ = now;
    begin(Activity::Work, now, work_left_);
  }

  void roll_back(double lost) {
    ledger_.lost += lost;
    ++counts_.rollbacks;
    resume_partial_ = false;
  }

  void complete() {
    const double now = activity_end_;
    switch (activity_) {
      case Activity::Work:
        pending_ = work_left_;
        work_left_ = 0.0;
        begin(Activity::Checkpoint, now, costs_.checkpoint);
        break;
      case Activity::Checkpoint:
        committed_ += pending_;
        pending_ = 0.0;
        ledger_.checkpoint += costs_.checkpoint;
        ++counts_.periodic_ckpts;
        resume_partial_ = false;
        if (base_ - committed_ <= 1e-9 * base_) {
          done_ = true;
          finish_ = now;
        } else {
          start_work(now, false);
        }
        break;
      case Activity::Downtime:
        ledger_.downtime += costs_.downtime;
        begin(Activity::Recovery, now, costs_.recovery);
        break;
      case Activity::Recovery:
        ledger_.recovery += costs_.recovery;
        start_work(now, resume_partial_);
        break;
    }
  }

  bool trust(double offset) {
    return std::visit(
        Overloaded{
            [](const Periodic&) { return false; },
            [&](const ThresholdTrust& p) { return offset >= p.threshold; },
            [&](const Inexact& p) { return offset >= p.threshold; },
            [&](const RandomTrust& p) { return bernoulli(p.trust_probability); },
            [&](const PiecewiseTrust& p) {
              for (std::size_t i = 0; i < p.intervals.size(); ++i) {
                const TrustInterval& in = p.intervals[i];
                const bool last = i + 1 == p.intervals.size();
                if (offset >= in.lower && (offset < in.upper || (last && offset <= in.upper))) {
                  return bernoulli(in.trust_probability);
                }
              }
              return false;
            },
        },
        policy_);
  }

  bool bernoulli(double probability) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < probability;
  }

  const Policy& policy_;
  double period_;
  CostParams costs_;
  double base_;
  double start_;
  double horizon_;
  Rng rng_;

  Activity activity_ = Activity::Work;
  double activity_start_ = 0.0;
  double activity_end_ = 0.0;
  double seg_start_ = 0.0;
  double work_left_ = 0.0;  // work before the next regular checkpoint
  double pending_ = 0.0;    // work being saved by the running regular checkpoint
  double committed_ = 0.0;
  bool resume_partial_ = false;
  bool done_ = false;
  double finish_ = 0.0;
  TimeLedger ledger_;
  SimCounts counts_;
};

}  // namespace

double policy_period(const Policy& policy) {
  return std::visit([](const auto& p) { return p.period; }, policy);
}

std::string describe(const Policy& policy) {
  std::ostringstream out;
  std::visit(Overloaded{
                 [&](const Periodic& p) { out << "periodic(T=" << p.period << ")"; },
                 [&](const ThresholdTrust& p) { out << "threshold(T=" << p.period << ", beta=" << p.threshold << ")"; },
                 [&](const RandomTrust& p) { out << "random(T=" << p.period << ", q=" << p.trust_probability << ")"; },
                 [&](const PiecewiseTrust& p) { out << "piecewise(T=" << p.period << ", intervals=" << p.intervals.size() << ")"; },
                 [&](const Inexact& p) { out << "inexact(T=" << p.period << ", beta=" << p.threshold << ")"; },
             },
             policy);
  return out.str();
}

void validate(const Policy& policy, const CostParams& costs) {
  costs.validate();
  const double period = policy_period(policy);
  require(std::isfinite(period) && period >= costs.checkpoint, "period must be >= C");
  auto check_threshold = [&](double threshold) {
    require(threshold >= 0.0 && threshold <= period, "trust threshold must lie in [0, T]");
  };
  std::visit(Overloaded{
                 [](const Periodic&) {},
                 [&](const ThresholdTrust& p) { check_threshold(p.threshold); },
                 [&](const Inexact& p) { check_threshold(p.threshold); },
                 [](const RandomTrust& p) {
                   require(p.trust_probability >= 0.0 && p.trust_probability <= 1.0, "trust probability must lie in [0, 1]");
                 },
                 [&](const PiecewiseTrust& p) {
                   require(!p.intervals.empty(), "piecewise policy needs at least one interval");
                   double expected = costs.proactive_checkpoint;
                   for (const TrustInterval& in : p.intervals) {
                     require(std::abs(in.lower - expected) <= 1e-9 * std::max(1.0, period),
                             "trust intervals must be contiguous from Cp");
                     require(in.upper > in.lower, "trust intervals must have positive length");
                     require(in.trust_probability >= 0.0 && in.trust_probability <= 1.0,
                             "trust probability must lie in [0, 1]");
                     expected = in.upper;
                   }
                   require(std::abs(expected - period) <= 1e-9 * std::max(1.0, period), "trust intervals must end at T");
                 },
             },
             policy);
}

HorizonExhausted::HorizonExhausted(double committed_work, double base_time, double reached)
    : std::runtime_error([&] {
        std::ostringstream msg;
        msg << "trace horizon exhausted at t=" << reached << " s with " << committed_work << " of " << base_time
            << " s of work saved (" << 100.0 * committed_work / base_time << "%)";
        return msg.str();
      }()),
      committed_work_(committed_work),
      base_time_(base_time) {}

SimOutcome simulate(const EventTrace& trace, const Policy& policy, const CostParams& costs, double base_time,
                    std::uint64_t rng_seed) {
  validate(policy, costs);
  require(policy_period(policy) > costs.checkpoint, "a period equal to C makes no progress");
  require(base_time > 0.0 && std::isfinite(base_time), "base time must be > 0");
  trace.validate();

  Machine machine(policy, costs, base_time, trace.job_start, trace.horizon, rng_seed);
  for (const SimEvent& e : expand_events(trace)) {
    machine.advance_to(e.time);
    if (machine.done()) break;
    if (e.is_prediction) {
      machine.on_prediction(e.time, e.is_true);
    } else {
      machine.on_fault(e.time, e.is_true);
    }
  }
  machine.advance_to(kInfinity);

  SimOutcome out = machine.outcome();
  if (std::abs(out.ledger.total() - out.makespan) > 1e-9 * out.makespan) {
    throw std::logic_error("simulator time ledger does not sum to the makespan");
  }
  return out;
}

Policy optimal_prediction_policy(double mtbf, const PredictorParams& predictor, const CostParams& costs) {
  const PeriodRecommendation rec = optimize_period(mtbf, predictor, costs);
  if (rec.branch == Branch::Prediction) return ThresholdTrust{rec.period, beta_lim(costs, predictor)};
  return Periodic{rec.period};
}

Policy inexact_prediction_policy(double mtbf, const PredictorParams& predictor, const CostParams& costs) {
  const Policy exact = optimal_prediction_policy(mtbf, predictor, costs);
  if (const auto* p = std::get_if<ThresholdTrust>(&exact)) return Inexact{p->period, p->threshold};
  return exact;
}

SimOutcome run_optimal_prediction(const EventTrace& trace, double mtbf, const PredictorParams& predictor,
                                  const CostParams& costs, double base_time, std::uint64_t rng_seed) {
  return simulate(trace, optimal_prediction_policy(mtbf, predictor, costs), costs, base_time, rng_seed);
}

double waste_of(double makespan, double base_time) {
  require(base_time > 0.0, "base time must be > 0");
  require(makespan >= base_time * (1.0 - 1e-9), "makespan cannot be shorter than the base time");
  return (makespan - base_time) / makespan;
}

}  // namespace ckpt
