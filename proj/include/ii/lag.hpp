#pragma once

#include <string>
#include <vector>

#include "ii/dataset.hpp"
#include "ii/imbalance.hpp"

namespace ii {

// Lags are index arithmetic on the dataset's time column; the dataset's
// group labels partition the panel (no groups = one series).
struct LagSpec {
  std::vector<std::string> source_cols;
  std::vector<std::string> target_cols;
  std::vector<int> lags;
};

struct LaggedPairs {
  Dataset data;
  std::vector<std::string> source_out;  // column names in `data`
  std::vector<std::string> target_out;
};

struct LagPoint {
  int lag = 0;
  bool ok = false;  // false = skipped (fewer than 3 paired rows)
  std::size_t pairs = 0;
  ImbalanceEstimate forward;   // source_t -> target_{t+lag}
  ImbalanceEstimate backward;  // target_{t+lag} -> source_t
};

struct LagScanResult {
  std::vector<LagPoint> points;  // ordered by lag value
  bool has_argmin = false;
  int argmin_lag = 0;  // argmin of the forward delta over usable lags
};

// Joins source columns at time t with target columns at t + delta_t within
// each group; rows ordered by (group, t). Target columns are renamed
// "<name>@+d" / "<name>@-d" for nonzero lags; at lag 0 columns keep their
// names and source/target overlaps appear once.
LaggedPairs build_lagged_pairs(const Dataset& ds, const LagSpec& spec,
                               int delta_t);

LagScanResult lag_scan(const Dataset& ds, const LagSpec& spec,
                       const ImbalanceOptions& opts = {});

}  // namespace ii
