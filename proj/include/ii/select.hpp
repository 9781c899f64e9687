#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ii/imbalance.hpp"
#include "ii/metric.hpp"

namespace ii {

enum class ObjectiveMode { Forward, Symmetric };

std::string to_string(ObjectiveMode m);

struct SelectionObjective {
  DistanceSpec target;
  ObjectiveMode mode = ObjectiveMode::Forward;
  int k = 1;
};

struct TraceStep {
  std::size_t d = 0;
  std::vector<std::string> subset;  // column names
  double objective = 0.0;
  double delta_ab = 0.0;  // subset -> target
  double delta_ba = 0.0;  // target -> subset
  std::size_t evaluations = 0;
  double wall_seconds = 0.0;
};

struct SelectionTrace {
  std::string strategy;
  std::vector<TraceStep> steps;
  std::size_t total_evaluations = 0;
  bool pool_target_overlap = false;  // permitted but reported
};

struct RandomTrial {
  std::vector<std::string> subset;
  double objective = 0.0;
  double delta_ab = 0.0;
  double delta_ba = 0.0;
};

struct RandomBaselineResult {
  std::size_t d = 0;
  std::vector<RandomTrial> trials;
  double min = 0.0;
  double median = 0.0;
};

struct ScaleSweep {
  std::string feature;
  std::vector<double> grid;
  std::vector<double> objective;  // profile over the grid
  double best_scale = 1.0;
};

struct ScaleResult {
  std::vector<std::string> features;  // anchor first
  std::vector<double> scales;         // anchor scale is 1
  double objective = 0.0;
  std::vector<ScaleSweep> sweeps;
};

// Objective value for a unit-scale subset against obj.target; outputs both
// raw imbalances.
double evaluate_objective(const Dataset& ds,
                          const std::vector<std::size_t>& subset,
                          const DistanceMatrix& dm_target,
                          const SelectionObjective& obj, double* delta_ab,
                          double* delta_ba);

// Evaluates every d-subset of the pool for each d <= d_max; ties broken by
// the lexicographically smallest column-name tuple. Errors out when
// sum_d C(|pool|, d) exceeds the budget, recommending greedy.
SelectionTrace exhaustive_best_subsets(const Dataset& ds,
                                       const std::vector<std::string>& pool,
                                       const SelectionObjective& obj,
                                       std::size_t d_max,
                                       std::uint64_t budget = 1000000);

// Plain forward selection with full re-evaluation per candidate; ties by
// smallest column name.
SelectionTrace greedy_forward(const Dataset& ds,
                              const std::vector<std::string>& pool,
                              const SelectionObjective& obj,
                              std::size_t d_max);

// Takes pool columns in their native order; the sequential baseline.
SelectionTrace native_order(const Dataset& ds,
                            const std::vector<std::string>& pool,
                            const SelectionObjective& obj, std::size_t d_max);

RandomBaselineResult random_baseline(const Dataset& ds,
                                     const std::vector<std::string>& pool,
                                     const SelectionObjective& obj,
                                     std::size_t d, std::size_t trials,
                                     std::uint64_t seed);

// 61 log-spaced points on [1e-3, 1e3] by default.
std::vector<double> log_grid(double lo = 1e-3, double hi = 1e3,
                             std::size_t points = 61);

// Coordinate descent over the grid: each non-anchor feature is swept in
// turn with the others held fixed; the anchor scale stays 1. One pass by
// default; the per-sweep objective profile is reported.
ScaleResult scale_optimize(const Dataset& ds,
                           const std::vector<std::string>& features,
                           const std::string& anchor,
                           const SelectionObjective& obj,
                           const std::vector<double>& grid = log_grid(),
                           std::size_t passes = 1);

}  // namespace ii
