#include "ckpt/harness.hpp"

#include "ckpt/analysis.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace ckpt {

namespace {

constexpr Heuristic kAllHeuristics[] = {
    Heuristic::Young,          Heuristic::Daly,         Heuristic::Rfo,
    Heuristic::OptimalPrediction, Heuristic::InexactPrediction, Heuristic::BestPeriodic,
    Heuristic::BestPrediction, Heuristic::BestInexact,
};

std::string fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
  return buffer;
}

std::string csv_quote(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

struct Batch {
  std::vector<double> wastes;
  std::vector<double> makespans;
  std::vector<ErrorRow> errors;
};

Batch run_batch(const Cell& cell, Heuristic heuristic, const Policy& policy, const std::vector<EventTrace>& traces,
                int workers) {
  const int n = static_cast<int>(traces.size());
  std::vector<std::optional<SimOutcome>> outcomes(n);
  std::vector<std::string> failures(n);
  parallel_for(n, workers, [&](int i) {
    try {
      outcomes[i] = simulate(traces[i], policy, cell.costs, cell.base_time, traces[i].seed);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });
  Batch batch;
  for (int i = 0; i < n; ++i) {
    if (outcomes[i]) {
      batch.wastes.push_back(outcomes[i]->waste);
      batch.makespans.push_back(outcomes[i]->makespan);
    } else {
      batch.errors.push_back({cell.scenario, cell.processors, std::string(to_string(heuristic)), i, failures[i]});
    }
  }
  return batch;
}

void summarize(const Batch& batch, ResultRow& row) {
  const auto n = batch.wastes.size();
  row.instances = static_cast<int>(n);
  if (n == 0) {
    row.mean_waste = row.waste_stderr = row.mean_makespan = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  double sum = 0.0;
  double makespan = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sum += batch.wastes[i];
    makespan += batch.makespans[i];
  }
  row.mean_waste = sum / n;
  row.mean_makespan = makespan / n;
  double squares = 0.0;
  for (double w : batch.wastes) squares += (w - row.mean_waste) * (w - row.mean_waste);
  row.waste_stderr = n > 1 ? std::sqrt(squares / (n - 1)) / std::sqrt(static_cast<double>(n)) : 0.0;
}

}  // namespace

PolicyFamily policy_family(Heuristic heuristic, const Cell& cell) {
  const double threshold = beta_lim(cell.costs, cell.predictor);
  switch (heuristic) {
    case Heuristic::BestPrediction:
    case Heuristic::OptimalPrediction:
      return [threshold](double t) -> Policy { return ThresholdTrust{t, std::min(threshold, t)}; };
    case Heuristic::BestInexact:
    case Heuristic::InexactPrediction:
      return [threshold](double t) -> Policy { return Inexact{t, std::min(threshold, t)}; };
    default:
      return [](double t) -> Policy { return Periodic{t}; };
  }
}

Policy reference_policy(Heuristic heuristic, const Cell& cell) {
  const double mu = cell.platform_mtbf;
  switch (heuristic) {
    case Heuristic::Young: return Periodic{period_young(mu, cell.costs.checkpoint)};
    case Heuristic::Daly: return Periodic{period_daly(mu, cell.costs)};
    case Heuristic::Rfo: return Periodic{period_rfo(mu, cell.costs)};
    case Heuristic::OptimalPrediction: return optimal_prediction_policy(mu, cell.predictor, cell.costs);
    case Heuristic::InexactPrediction: return inexact_prediction_policy(mu, cell.predictor, cell.costs);
    case Heuristic::BestPeriodic: return Periodic{period_rfo(mu, cell.costs)};
    case Heuristic::BestPrediction: return optimal_prediction_policy(mu, cell.predictor, cell.costs);
    case Heuristic::BestInexact: return inexact_prediction_policy(mu, cell.predictor, cell.costs);
  }
  throw InvalidArgument("unknown heuristic");
}

namespace {

bool is_best_period(Heuristic h) {
  return h == Heuristic::BestPeriodic || h == Heuristic::BestPrediction || h == Heuristic::BestInexact;
}

std::string format_ratio(double value) { return format_double(value); }

}  // namespace

bool uses_inexact_traces(Heuristic h) {
  return h == Heuristic::InexactPrediction || h == Heuristic::BestInexact;
}

TraceScenario traces_for(Heuristic heuristic, const Cell& cell) {
  TraceScenario scenario = cell.traces;
  if (uses_inexact_traces(heuristic)) scenario.inexact_window = 2.0 * cell.costs.checkpoint;
  return scenario;
}

std::string_view to_string(Heuristic heuristic) {
  switch (heuristic) {
    case Heuristic::Young: return "young";
    case Heuristic::Daly: return "daly";
    case Heuristic::Rfo: return "rfo";
    case Heuristic::OptimalPrediction: return "optimal-prediction";
    case Heuristic::InexactPrediction: return "inexact-prediction";
    case Heuristic::BestPeriodic: return "best-periodic";
    case Heuristic::BestPrediction: return "best-prediction";
    case Heuristic::BestInexact: return "best-inexact";
  }
  return "unknown";
}

Heuristic parse_heuristic(std::string_view name) {
  std::string key(trim_view(name));
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return c == '_' ? '-' : std::tolower(c); });
  for (Heuristic h : kAllHeuristics) {
    if (key == to_string(h)) return h;
  }
  throw ConfigError("unknown heuristic '" + std::string(name) +
                    "' (young, daly, rfo, optimal-prediction, inexact-prediction, best-periodic, best-prediction, "
                    "best-inexact)");
}

DistributionSpec parse_distribution(std::string_view text, double mean, bool* log_based) {
  text = trim_view(text);
  if (log_based) *log_based = false;
  if (text == "exp" || text == "exponential") return Exponential{mean};
  if (text == "uniform") return UniformMean{mean};
  if (text.substr(0, 8) == "weibull:") return Weibull{parse_real(text.substr(8)), mean};
  if (text.substr(0, 4) == "fta:") {
    if (log_based) *log_based = true;
    return ingest_fta_durations(std::filesystem::path(std::string(trim_view(text.substr(4)))));
  }
  throw ConfigError("unknown distribution '" + std::string(text) + "' (exp, weibull:K, uniform, fta:FILE)");
}

void ExperimentConfig::validate() const {
  if (scenario.processors.empty()) throw ConfigError("scenario.processors must list at least one platform size");
  for (auto n : scenario.processors) {
    if (n < 1) throw ConfigError("platform sizes must be >= 1");
  }
  if (recalls.empty() || precisions.empty() || proactive_ratios.empty()) {
    throw ConfigError("predictor and cost lists must be nonempty");
  }
  if (!(scenario.years_per_platform > 0.0)) throw ConfigError("scenario.years_per_platform must be > 0");
  if (!(scenario.horizon > scenario.job_start) || scenario.job_start < 0.0) {
    throw ConfigError("need 0 <= scenario.job_start < scenario.horizon");
  }
  if (instances < 1) throw ConfigError("run.instances must be >= 1");
  if (search_rounds < 0) throw ConfigError("run.search_rounds must be >= 0");
  try {
    ckpt::validate(scenario.unit_family);
    for (double r : recalls) PredictorParams{r, 1.0}.validate();
    for (double p : precisions) PredictorParams{0.0, p}.validate();
    for (double ratio : proactive_ratios) {
      CostParams c = costs;
      c.proactive_checkpoint = ratio * costs.checkpoint;
      c.validate();
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_experiment_config(const ConfigFile& file, const std::filesystem::path& base_dir) {
  ExperimentConfig config;
  auto where = [&](const char* section, const char* key) {
    return file.source() + ":" + std::to_string(file.line_of(section, key)) + ": " + section + "." + key + ": ";
  };
  auto read = [&](const char* section, const char* key, auto parse) {
    const auto value = file.get(section, key);
    if (!value) return;
    try {
      parse(*value);
    } catch (const ConfigError& e) {
      throw ConfigError(where(section, key) + e.what());
    } catch (const InvalidArgument& e) {
      throw ConfigError(where(section, key) + e.what());
    } catch (const ParseError& e) {
      throw ConfigError(where(section, key) + e.what());
    } catch (const std::runtime_error& e) {
      throw ConfigError(where(section, key) + e.what());
    }
  };
  auto reals = [](const std::string& v) {
    std::vector<double> out;
    for (const auto& item : split_list(v)) out.push_back(parse_real(item));
    return out;
  };

  auto& s = config.scenario;
  bool years_given = false;
  std::string distribution = "exp";
  read("scenario", "id", [&](const std::string& v) { s.id = v; });
  read("scenario", "individual_mtbf", [&](const std::string& v) { s.individual_mtbf = parse_duration(v); });
  read("scenario", "processors", [&](const std::string& v) {
    s.processors.clear();
    for (const auto& item : split_list(v)) s.processors.push_back(parse_count(item));
  });
  read("scenario", "horizon", [&](const std::string& v) { s.horizon = parse_duration(v); });
  read("scenario", "job_start", [&](const std::string& v) { s.job_start = parse_duration(v); });
  read("scenario", "years_per_platform", [&](const std::string& v) {
    s.years_per_platform = parse_real(v);
    years_given = true;
  });
  read("scenario", "false_predictions", [&](const std::string& v) {
    if (v == "auto") s.false_predictions = FalsePredictionLaw::Auto;
    else if (v == "same") s.false_predictions = FalsePredictionLaw::Same;
    else if (v == "uniform") s.false_predictions = FalsePredictionLaw::Uniform;
    else throw ConfigError("expected auto, same or uniform");
  });
  read("scenario", "distribution", [&](const std::string& v) {
    distribution = v;
    std::string_view text = trim_view(v);
    if (text.substr(0, 4) == "fta:") {
      std::filesystem::path path(std::string(trim_view(text.substr(4))));
      if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
      distribution = "fta:" + path.string();
    }
    s.unit_family = parse_distribution(distribution, s.individual_mtbf, &s.log_based);
  });
  if (!s.log_based) s.unit_family = parse_distribution(distribution, s.individual_mtbf);
  if (s.log_based && !years_given) s.years_per_platform = 250.0;

  read("predictor", "recall", [&](const std::string& v) { config.recalls = reals(v); });
  read("predictor", "precision", [&](const std::string& v) { config.precisions = reals(v); });

  read("costs", "checkpoint", [&](const std::string& v) { config.costs.checkpoint = parse_duration(v); });
  read("costs", "downtime", [&](const std::string& v) { config.costs.downtime = parse_duration(v); });
  read("costs", "recovery", [&](const std::string& v) { config.costs.recovery = parse_duration(v); });
  read("costs", "proactive_ratio", [&](const std::string& v) { config.proactive_ratios = reals(v); });

  read("run", "heuristics", [&](const std::string& v) {
    config.heuristics.clear();
    for (const auto& item : split_list(v)) config.heuristics.push_back(parse_heuristic(item));
  });
  read("run", "instances", [&](const std::string& v) { config.instances = static_cast<int>(parse_count(v)); });
  read("run", "base_seed", [&](const std::string& v) { config.base_seed = static_cast<std::uint64_t>(parse_count(v)); });
  read("run", "search_rounds", [&](const std::string& v) { config.search_rounds = static_cast<int>(parse_count(v)); });

  if (const auto unused = file.unused_keys(); !unused.empty()) {
    std::string list;
    for (const auto& key : unused) list += (list.empty() ? "" : ", ") + key;
    throw ConfigError(file.source() + ": unknown keys: " + list);
  }
  config.validate();
  return config;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(ConfigFile::load(path), path.parent_path());
}

Cell make_cell(const ExperimentConfig& config, std::int64_t processors, const PredictorParams& predictor,
               double proactive_ratio) {
  const ScenarioConfig& s = config.scenario;
  Cell cell;
  cell.processors = processors;
  cell.predictor = predictor;
  cell.costs = config.costs;
  cell.costs.proactive_checkpoint = proactive_ratio * config.costs.checkpoint;
  cell.base_time = s.years_per_platform * kSecondsPerYear / static_cast<double>(processors);
  cell.scenario = s.id + "|r=" + format_ratio(predictor.recall) + "|p=" + format_ratio(predictor.precision) +
                  "|cp=" + format_ratio(proactive_ratio);

  TraceScenario& t = cell.traces;
  t.units = s.log_based ? std::max<std::int64_t>(1, processors / 4) : processors;
  t.unit_distribution = s.log_based ? s.unit_family : with_mean(s.unit_family, s.individual_mtbf);
  t.predictor = predictor;
  t.horizon = s.horizon;
  t.job_start = s.job_start;
  const bool uniform = s.false_predictions == FalsePredictionLaw::Uniform ||
                       (s.false_predictions == FalsePredictionLaw::Auto && s.log_based);
  if (uniform) t.false_prediction_family = UniformMean{1.0};
  cell.platform_mtbf = t.platform_mtbf();
  return cell;
}

std::vector<Cell> expand_cells(const ExperimentConfig& config) {
  std::vector<Cell> cells;
  for (auto n : config.scenario.processors) {
    for (double r : config.recalls) {
      for (double p : config.precisions) {
        for (double ratio : config.proactive_ratios) cells.push_back(make_cell(config, n, {r, p}, ratio));
      }
    }
  }
  return cells;
}

std::vector<EventTrace> generate_traces(const TraceScenario& scenario, std::uint64_t base_seed, int instances,
                                        int workers) {
  std::vector<EventTrace> traces(instances);
  parallel_for(instances, workers, [&](int i) {
    traces[i] = generate_trace(scenario, instance_seed(base_seed, static_cast<std::uint64_t>(i)));
  });
  return traces;
}

PeriodRow period_row(std::int64_t processors, double individual_mtbf, const CostParams& costs) {
  PeriodRow row;
  row.processors = processors;
  row.platform_mtbf = mu_platform({processors, individual_mtbf});
  row.young = period_young(row.platform_mtbf, costs.checkpoint);
  row.daly = period_daly(row.platform_mtbf, costs);
  row.rfo = period_rfo(row.platform_mtbf, costs);
  row.optimal = period_optimal_exponential(row.platform_mtbf, costs.checkpoint);
  return row;
}

ExperimentReport run_experiment(const ExperimentConfig& config, int workers, std::ostream* log) {
  config.validate();
  ExperimentReport report;

  if (std::holds_alternative<Exponential>(config.scenario.unit_family) && !config.scenario.log_based) {
    for (auto n : config.scenario.processors) {
      try {
        report.periods.push_back(period_row(n, config.scenario.individual_mtbf, config.costs));
      } catch (const std::exception& e) {
        report.errors.push_back({config.scenario.id, n, "periods", -1, e.what()});
      }
    }
  }
  if (config.heuristics.empty()) return report;

  const bool need_inexact = std::any_of(config.heuristics.begin(), config.heuristics.end(), uses_inexact_traces);
  for (const Cell& cell : expand_cells(config)) {
    if (log) {
      *log << "cell " << cell.scenario << " n=" << cell.processors << " mu=" << cell.platform_mtbf
           << "s base=" << cell.base_time << "s\n";
    }
    if (const auto* emp = std::get_if<EmpiricalDurations>(&cell.traces.unit_distribution);
        emp && log && static_cast<std::size_t>(cell.traces.units) > emp->samples.size()) {
      *log << "warning: " << cell.traces.units << " units exceed the " << emp->samples.size()
           << " recorded availability intervals; the empirical law is oversampled\n";
    }
    const auto exact = generate_traces(cell.traces, config.base_seed, config.instances, workers);
    std::vector<EventTrace> inexact;
    if (need_inexact) {
      TraceScenario widened = cell.traces;
      widened.inexact_window = 2.0 * cell.costs.checkpoint;
      inexact = generate_traces(widened, config.base_seed, config.instances, workers);
    }

    std::vector<ResultRow> rows;
    double rfo_makespan = std::numeric_limits<double>::quiet_NaN();
    std::vector<Heuristic> order{Heuristic::Rfo};
    for (Heuristic h : config.heuristics) {
      if (h != Heuristic::Rfo) order.push_back(h);
    }
    const bool rfo_requested =
        std::find(config.heuristics.begin(), config.heuristics.end(), Heuristic::Rfo) != config.heuristics.end();

    for (Heuristic h : order) {
      const auto& traces = uses_inexact_traces(h) ? inexact : exact;
      ResultRow row;
      row.scenario = cell.scenario;
      row.processors = cell.processors;
      row.heuristic = h;
      try {
        const Policy reference = reference_policy(h, cell);
        if (is_best_period(h)) {
          SearchSpec spec;
          spec.grid = default_grid(policy_period(reference), cell.costs.checkpoint);
          spec.instances_per_candidate = config.instances;
          spec.refinement_rounds = config.search_rounds;
          const SearchResult best = best_period(policy_family(h, cell), traces, cell.costs, cell.base_time, spec, workers);
          row.period = best.period;
          row.mean_waste = best.mean_waste;
          row.waste_stderr = best.waste_stderr;
          row.mean_makespan = best.mean_makespan;
          row.instances = config.instances;
          for (const auto& c : best.evaluated) {
            if (c.period == best.period) row.instances = c.completed;
          }
          if (row.instances < config.instances) {
            report.errors.push_back({cell.scenario, cell.processors, std::string(to_string(h)), -1,
                                     std::to_string(config.instances - row.instances) +
                                         " instances outlived the trace horizon at the best period"});
          }
        } else {
          row.period = policy_period(reference);
          const Batch batch = run_batch(cell, h, reference, traces, workers);
          summarize(batch, row);
          report.errors.insert(report.errors.end(), batch.errors.begin(), batch.errors.end());
        }
      } catch (const std::exception& e) {
        report.errors.push_back({cell.scenario, cell.processors, std::string(to_string(h)), -1, e.what()});
        continue;
      }
      if (h == Heuristic::Rfo) {
        rfo_makespan = row.mean_makespan;
        if (!rfo_requested) continue;
      }
      rows.push_back(row);
    }
    for (ResultRow& row : rows) {
      row.gain_vs_rfo_percent = row.heuristic == Heuristic::Rfo
                                    ? 0.0
                                    : 100.0 * (rfo_makespan - row.mean_makespan) / rfo_makespan;
    }
    report.results.insert(report.results.end(), rows.begin(), rows.end());
  }
  return report;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool days) {
  out << "scenario,n,heuristic,period_s,mean_waste,waste_stderr," << (days ? "mean_makespan_days" : "mean_makespan_s")
      << ",gain_vs_rfo_percent,instances\n";
  auto num = [](double v) { return std::isnan(v) ? std::string() : format_double(v); };
  for (const ResultRow& r : rows) {
    out << csv_quote(r.scenario) << ',' << r.processors << ',' << to_string(r.heuristic) << ',' << num(r.period)
        << ',' << num(r.mean_waste) << ',' << num(r.waste_stderr) << ','
        << num(days ? r.mean_makespan / kSecondsPerDay : r.mean_makespan) << ',' << num(r.gain_vs_rfo_percent)
        << ',' << r.instances << '\n';
  }
}

void write_periods_csv(std::ostream& out, const std::vector<PeriodRow>& rows) {
  out << "n,mtbf_s,young_s,daly_s,rfo_s,optimal_s,young_dev_percent,daly_dev_percent,rfo_dev_percent\n";
  for (const PeriodRow& r : rows) {
    out << r.processors << ',' << fixed(r.platform_mtbf, 1) << ',' << fixed(r.young, 1) << ',' << fixed(r.daly, 1)
        << ',' << fixed(r.rfo, 1) << ',' << fixed(r.optimal, 1) << ',' << fixed(r.deviation_percent(r.young), 2)
        << ',' << fixed(r.deviation_percent(r.daly), 2) << ',' << fixed(r.deviation_percent(r.rfo), 2) << '\n';
  }
}

void write_errors_csv(std::ostream& out, const std::vector<ErrorRow>& rows) {
  out << "scenario,n,heuristic,instance,message\n";
  for (const ErrorRow& r : rows) {
    out << csv_quote(r.scenario) << ',' << r.processors << ',' << csv_quote(r.heuristic) << ',' << r.instance << ','
        << csv_quote(r.message) << '\n';
  }
}

void write_experiment(const ExperimentReport& report, const ExperimentConfig& config,
                      const std::filesystem::path& out_dir, bool days) {
  std::filesystem::create_directories(out_dir);
  auto open = [&](const char* name) {
    std::ofstream out(out_dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (out_dir / name).string());
    return out;
  };
  {
    auto out = open("results.csv");
    write_results_csv(out, report.results, days);
  }
  if (std::holds_alternative<Exponential>(config.scenario.unit_family) && !config.scenario.log_based) {
    auto out = open("periods.csv");
    write_periods_csv(out, report.periods);
  }
  {
    auto out = open("errors.csv");
    write_errors_csv(out, report.errors);
  }
}

std::vector<WasteCurveRow> emit_waste_curve(const Cell& cell, Heuristic heuristic, const std::vector<double>& grid,
                                            int instances, std::uint64_t base_seed, int workers) {
  const auto traces = generate_traces(traces_for(heuristic, cell), base_seed, instances, workers);
  const PolicyFamily family = policy_family(heuristic, cell);
  const bool periodic = std::holds_alternative<Periodic>(family(2.0 * cell.costs.checkpoint + 1.0));

  std::vector<WasteCurveRow> rows;
  for (double period : grid) {
    WasteCurveRow row;
    row.period = period;
    row.valid = period > cell.costs.checkpoint;
    if (row.valid) {
      row.analytical = periodic ? waste_no_prediction(period, cell.platform_mtbf, cell.costs).total
                                : waste_with_prediction(period, cell.platform_mtbf, cell.predictor, cell.costs);
      const CandidateScore score = evaluate_period(family, period, traces, cell.costs, cell.base_time, workers);
      row.simulated_mean = score.mean_waste;
      row.simulated_stderr = score.waste_stderr;
      row.instances = score.completed;
    }
    rows.push_back(row);
  }
  return rows;
}

void write_waste_curve_csv(std::ostream& out, const std::vector<WasteCurveRow>& rows) {
  out << "period_s,valid,analytical_waste,simulated_mean_waste,simulated_stderr,instances\n";
  for (const WasteCurveRow& r : rows) {
    out << format_double(r.period) << ',' << (r.valid ? "true" : "false") << ',';
    if (r.valid) {
      out << format_double(r.analytical) << ',' << format_double(r.simulated_mean) << ','
          << format_double(r.simulated_stderr) << ',' << r.instances;
    } else {
      out << ",,,0";
    }
    out << '\n';
  }
}

}  // namespace ckpt
