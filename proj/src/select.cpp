#include "ii/select.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "ii/error.hpp"
#include "ii/rng.hpp"

namespace ii {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<std::string> sorted_names(const Dataset& ds,
                                      const std::vector<std::string>& pool) {
  if (pool.empty()) throw Error("empty feature pool");
  std::unordered_set<std::string> seen;
  for (const auto& name : pool) {
    ds.column_index(name);  // existence check
    if (!seen.insert(name).second) throw Error("duplicate pool column: " + name);
  }
  auto out = pool;
  std::sort(out.begin(), out.end());
  return out;
}

bool overlaps_target(const Dataset& ds, const std::vector<std::string>& pool,
                     const DistanceSpec& target) {
  std::unordered_set<std::size_t> t(target.features.begin(),
                                    target.features.end());
  for (const auto& name : pool) {
    if (t.count(ds.column_index(name))) return true;
  }
  return false;
}

std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t k,
                              std::uint64_t cap) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (r > cap) return cap + 1;
    r = r * (n - k + i) / i;
  }
  return r;
}

}  // namespace

std::string to_string(ObjectiveMode m) {
  return m == ObjectiveMode::Forward ? "forward" : "symmetric";
}

double evaluate_objective(const Dataset& ds,
                          const std::vector<std::size_t>& subset,
                          const DistanceMatrix& dm_target,
                          const SelectionObjective& obj, double* delta_ab,
                          double* delta_ba) {
  const DistanceMatrix dm_a =
      pairwise_distances(ds, DistanceSpec::from_indices(subset));
  ImbalanceOptions opts;
  opts.k = obj.k;
  const ImbalanceEstimate ab = imbalance_from_matrices(dm_a, dm_target, opts);
  const ImbalanceEstimate ba = imbalance_from_matrices(dm_target, dm_a, opts);
  if (delta_ab) *delta_ab = ab.delta;
  if (delta_ba) *delta_ba = ba.delta;
  return obj.mode == ObjectiveMode::Forward
             ? ab.delta
             : symmetric_imbalance(ab.delta, ba.delta);
}

SelectionTrace exhaustive_best_subsets(const Dataset& ds,
                                       const std::vector<std::string>& pool,
                                       const SelectionObjective& obj,
                                       std::size_t d_max,
                                       std::uint64_t budget) {
  const auto names = sorted_names(ds, pool);
  obj.target.validate(ds);
  if (d_max < 1 || d_max > names.size()) {
    throw Error("d_max must lie in [1, |pool|]");
  }
  std::uint64_t total = 0;
  for (std::size_t d = 1; d <= d_max; ++d) {
    total += binomial_capped(names.size(), d, budget);
    if (total > budget) {
      throw Error("budget exceeded: too many subsets to enumerate; use the "
                  "greedy strategy");
    }
  }

  const DistanceMatrix dm_target = pairwise_distances(ds, obj.target);
  SelectionTrace trace;
  trace.strategy = "exhaustive";
  trace.pool_target_overlap = overlaps_target(ds, names, obj.target);

  std::vector<std::size_t> pool_idx(names.size());
  for (std::size_t p = 0; p < names.size(); ++p) {
    pool_idx[p] = ds.column_index(names[p]);
  }

  for (std::size_t d = 1; d <= d_max; ++d) {
    const auto t0 = Clock::now();
    TraceStep step;
    step.d = d;
    double best = std::numeric_limits<double>::infinity();

    // combinations in lexicographic order over the name-sorted pool; a
    // strict min keeps the lexicographically smallest tying tuple
    std::vector<std::size_t> comb(d);
    for (std::size_t p = 0; p < d; ++p) comb[p] = p;
    while (true) {
      std::vector<std::size_t> subset(d);
      for (std::size_t p = 0; p < d; ++p) subset[p] = pool_idx[comb[p]];
      double ab = 0.0, ba = 0.0;
      const double val = evaluate_objective(ds, subset, dm_target, obj, &ab, &ba);
      ++step.evaluations;
      if (val < best) {
        best = val;
        step.objective = val;
        step.delta_ab = ab;
        step.delta_ba = ba;
        step.subset.clear();
        for (std::size_t p = 0; p < d; ++p) step.subset.push_back(names[comb[p]]);
      }
      // advance
      std::size_t p = d;
      while (p > 0 && comb[p - 1] == names.size() - d + (p - 1)) --p;
      if (p == 0) break;
      ++comb[p - 1];
      for (std::size_t q = p; q < d; ++q) comb[q] = comb[q - 1] + 1;
    }
    step.wall_seconds = seconds_since(t0);
    trace.total_evaluations += step.evaluations;
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

SelectionTrace greedy_forward(const Dataset& ds,
                              const std::vector<std::string>& pool,
                              const SelectionObjective& obj,
                              std::size_t d_max) {
  const auto names = sorted_names(ds, pool);
  obj.target.validate(ds);
  if (d_max < 1 || d_max > names.size()) {
    throw Error("d_max must lie in [1, |pool|]");
  }
  const DistanceMatrix dm_target = pairwise_distances(ds, obj.target);

  SelectionTrace trace;
  trace.strategy = "greedy";
  trace.pool_target_overlap = overlaps_target(ds, names, obj.target);

  std::vector<std::string> chosen;
  std::vector<std::size_t> chosen_idx;
  std::vector<std::string> remaining = names;

  for (std::size_t d = 1; d <= d_max; ++d) {
    const auto t0 = Clock::now();
    TraceStep step;
    step.d = d;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_cand = 0;

    for (std::size_t c = 0; c < remaining.size(); ++c) {
      auto subset = chosen_idx;
      subset.push_back(ds.column_index(remaining[c]));
      double ab = 0.0, ba = 0.0;
      const double val = evaluate_objective(ds, subset, dm_target, obj, &ab, &ba);
      ++step.evaluations;
      if (val < best) {  // remaining is name-sorted, so ties keep the smallest
        best = val;
        best_cand = c;
        step.objective = val;
        step.delta_ab = ab;
        step.delta_ba = ba;
      }
    }

    chosen.push_back(remaining[best_cand]);
    chosen_idx.push_back(ds.column_index(remaining[best_cand]));
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_cand));
    step.subset = chosen;
    step.wall_seconds = seconds_since(t0);
    trace.total_evaluations += step.evaluations;
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

SelectionTrace native_order(const Dataset& ds,
                            const std::vector<std::string>& pool,
                            const SelectionObjective& obj, std::size_t d_max) {
  if (pool.empty()) throw Error("empty feature pool");
  obj.target.validate(ds);
  if (d_max < 1 || d_max > pool.size()) {
    throw Error("d_max must lie in [1, |pool|]");
  }
  const DistanceMatrix dm_target = pairwise_distances(ds, obj.target);

  SelectionTrace trace;
  trace.strategy = "native-order";
  trace.pool_target_overlap = overlaps_target(ds, pool, obj.target);

  std::vector<std::size_t> subset;
  std::vector<std::string> subset_names;
  for (std::size_t d = 1; d <= d_max; ++d) {
    const auto t0 = Clock::now();
    subset.push_back(ds.column_index(pool[d - 1]));
    subset_names.push_back(pool[d - 1]);
    TraceStep step;
    step.d = d;
    step.subset = subset_names;
    step.objective =
        evaluate_objective(ds, subset, dm_target, obj, &step.delta_ab,
                           &step.delta_ba);
    step.evaluations = 1;
    step.wall_seconds = seconds_since(t0);
    trace.total_evaluations += 1;
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

RandomBaselineResult random_baseline(const Dataset& ds,
                                     const std::vector<std::string>& pool,
                                     const SelectionObjective& obj,
                                     std::size_t d, std::size_t trials,
                                     std::uint64_t seed) {
  const auto names = sorted_names(ds, pool);
  obj.target.validate(ds);
  if (trials < 1) throw Error("need at least one trial");
  if (d < 1 || d > names.size()) throw Error("subset size exceeds pool");
  const DistanceMatrix dm_target = pairwise_distances(ds, obj.target);

  RandomBaselineResult result;
  result.d = d;
  for (std::size_t t = 0; t < trials; ++t) {
    SplitRng rng(seed, t);
    std::vector<std::size_t> perm(names.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = 0; i < d; ++i) {  // Fisher-Yates prefix
      const std::size_t j = i + static_cast<std::size_t>(rng.below(perm.size() - i));
      std::swap(perm[i], perm[j]);
    }
    RandomTrial trial;
    std::vector<std::size_t> subset;
    for (std::size_t i = 0; i < d; ++i) trial.subset.push_back(names[perm[i]]);
    std::sort(trial.subset.begin(), trial.subset.end());
    for (const auto& name : trial.subset) subset.push_back(ds.column_index(name));
    trial.objective = evaluate_objective(ds, subset, dm_target, obj,
                                         &trial.delta_ab, &trial.delta_ba);
    result.trials.push_back(std::move(trial));
  }

  std::vector<double> vals;
  for (const auto& t : result.trials) vals.push_back(t.objective);
  std::sort(vals.begin(), vals.end());
  result.min = vals.front();
  result.median = vals.size() % 2 == 1
                      ? vals[vals.size() / 2]
                      : 0.5 * (vals[vals.size() / 2 - 1] + vals[vals.size() / 2]);
  return result;
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0.0) || !(hi > lo)) throw Error("log grid needs 0 < lo < hi");
  if (points < 1) throw Error("log grid needs at least one point");
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  const double llo = std::log10(lo), lhi = std::log10(hi);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = std::pow(10.0, llo + (lhi - llo) * static_cast<double>(i) /
                                       static_cast<double>(points - 1));
  }
  return grid;
}

ScaleResult scale_optimize(const Dataset& ds,
                           const std::vector<std::string>& features,
                           const std::string& anchor,
                           const SelectionObjective& obj,
                           const std::vector<double>& grid,
                           std::size_t passes) {
  if (grid.empty()) throw Error("empty scale grid");
  for (double g : grid) {
    if (!(g > 0.0)) throw Error("scale grid values must be positive");
  }
  if (features.empty()) throw Error("no features to scale");
  obj.target.validate(ds);

  DistanceSpec spec;
  spec.features.push_back(ds.column_index(anchor));
  spec.scales.push_back(1.0);
  for (const auto& name : features) {
    const std::size_t idx = ds.column_index(name);
    if (idx == spec.features.front()) throw Error("anchor repeated in features");
    spec.features.push_back(idx);
    spec.scales.push_back(1.0);
  }
  spec.validate(ds);

  const DistanceMatrix dm_target = pairwise_distances(ds, obj.target);
  ImbalanceOptions iopts;
  iopts.k = obj.k;

  const auto objective_at = [&](const DistanceSpec& s) {
    const DistanceMatrix dm_a = pairwise_distances(ds, s);
    const ImbalanceEstimate ab = imbalance_from_matrices(dm_a, dm_target, iopts);
    if (obj.mode == ObjectiveMode::Forward) return ab.delta;
    const ImbalanceEstimate ba = imbalance_from_matrices(dm_target, dm_a, iopts);
    return symmetric_imbalance(ab.delta, ba.delta);
  };

  ScaleResult result;
  result.features.push_back(anchor);
  for (const auto& name : features) result.features.push_back(name);

  double current = objective_at(spec);
  for (std::size_t pass = 0; pass < passes; ++pass) {
    for (std::size_t f = 1; f < spec.features.size(); ++f) {
      ScaleSweep sweep;
      sweep.feature = ds.column_names()[spec.features[f]];
      sweep.grid = grid;
      double best = std::numeric_limits<double>::infinity();
      double best_scale = spec.scales[f];
      for (double g : grid) {
        DistanceSpec trial = spec;
        trial.scales[f] = g;
        const double val = objective_at(trial);
        sweep.objective.push_back(val);
        if (val < best) {  // ties keep the smaller grid value
          best = val;
          best_scale = g;
        }
      }
      spec.scales[f] = best_scale;
      sweep.best_scale = best_scale;
      current = best;
      result.sweeps.push_back(std::move(sweep));
    }
  }
  result.scales = spec.scales;
  result.objective = current;
  return result;
}

}  // namespace ii
