#include "ckpt/search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <string>
#include <thread>

namespace ckpt {

void SearchSpec::validate(const CostParams& costs) const {
  if (grid.empty()) throw InvalidArgument("search grid is empty");
  if (instances_per_candidate < 1) throw InvalidArgument("need at least one instance per candidate");
  if (refinement_rounds < 0) throw InvalidArgument("refinement rounds must be >= 0");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] < costs.checkpoint) throw InvalidArgument("grid periods must be >= C");
    if (i > 0 && !(grid[i] > grid[i - 1])) throw InvalidArgument("grid must be strictly increasing");
  }
}

std::vector<double> default_grid(double reference, double checkpoint, int points) {
  if (!(reference > 0.0) || points < 2) throw InvalidArgument("default grid needs a positive reference and >= 2 points");
  const double lo = std::max(checkpoint, reference / 10.0);
  const double hi = std::max(lo, 10.0 * reference);
  std::vector<double> grid;
  const double ratio = std::pow(hi / lo, 1.0 / (points - 1));
  for (int i = 0; i < points; ++i) grid.push_back(i + 1 == points ? hi : lo * std::pow(ratio, i));
  if (reference >= checkpoint) grid.push_back(reference);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

int default_workers() {
  if (const char* env = std::getenv("CKPT_WORKERS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<int>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int count, int workers, const std::function<void(int)>& task) {
  workers = std::clamp(workers, 1, std::max(1, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

CandidateScore evaluate_period(const PolicyFamily& family, double period, const std::vector<EventTrace>& traces,
                               const CostParams& costs, double base_time, int workers) {
  const int n = static_cast<int>(traces.size());
  if (n == 0) throw InvalidArgument("no traces to evaluate on");
  std::vector<double> wastes(n, 1.0);
  std::vector<double> makespans(n, kInfinity);
  std::vector<char> completed(n, 0);
  if (period > costs.checkpoint) {
    const Policy policy = family(period);
    parallel_for(n, workers, [&](int i) {
      try {
        const SimOutcome out = simulate(traces[i], policy, costs, base_time, traces[i].seed);
        wastes[i] = out.waste;
        makespans[i] = out.makespan;
        completed[i] = 1;
      } catch (const HorizonExhausted&) {
      }
    });
  }

  CandidateScore score;
  score.period = period;
  double sum = 0.0;
  double sum_makespan = 0.0;
  for (int i = 0; i < n; ++i) {
    sum += wastes[i];
    sum_makespan += makespans[i];
    score.completed += completed[i];
  }
  score.mean_waste = sum / n;
  score.mean_makespan = sum_makespan / n;
  double squares = 0.0;
  for (double w : wastes) squares += (w - score.mean_waste) * (w - score.mean_waste);
  score.waste_stderr = n > 1 ? std::sqrt(squares / (n - 1)) / std::sqrt(static_cast<double>(n)) : 0.0;
  return score;
}

SearchResult best_period(const PolicyFamily& family, const std::vector<EventTrace>& traces,
                         const CostParams& costs, double base_time, const SearchSpec& spec, int workers) {
  spec.validate(costs);
  if (static_cast<int>(traces.size()) < spec.instances_per_candidate) {
    throw InvalidArgument("fewer traces than instances per candidate");
  }
  const std::vector<EventTrace> used(traces.begin(), traces.begin() + spec.instances_per_candidate);

  SearchResult result;
  std::map<double, CandidateScore> scores;
  auto score_all = [&](const std::vector<double>& grid) {
    for (double period : grid) {
      if (scores.count(period)) continue;
      scores[period] = evaluate_period(family, period, used, costs, base_time, workers);
      result.evaluated.push_back(scores[period]);
    }
  };
  auto incumbent = [&] {
    auto best = scores.begin();
    for (auto it = scores.begin(); it != scores.end(); ++it) {
      if (it->second.mean_waste < best->second.mean_waste) best = it;
    }
    return best;
  };

  std::vector<double> grid = spec.grid;
  score_all(grid);
  for (int round = 0; round < spec.refinement_rounds; ++round) {
    const double best = incumbent()->first;
    const auto pos = std::lower_bound(grid.begin(), grid.end(), best);
    const double lo = pos == grid.begin() ? best : *std::prev(pos);
    const double hi = std::next(pos) == grid.end() ? best : *std::next(pos);
    if (!(hi > lo)) break;
    std::vector<double> finer;
    const int steps = 20;
    for (int i = 0; i <= steps; ++i) finer.push_back(lo + (hi - lo) * i / steps);
    finer.push_back(best);
    std::sort(finer.begin(), finer.end());
    finer.erase(std::unique(finer.begin(), finer.end()), finer.end());
    score_all(finer);
    grid = finer;
  }

  const CandidateScore& best = incumbent()->second;
  result.period = best.period;
  result.mean_waste = best.mean_waste;
  result.waste_stderr = best.waste_stderr;
  result.mean_makespan = best.mean_makespan;
  return result;
}

}  // namespace ckpt
