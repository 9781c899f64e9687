#include "ii/lag.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "ii/error.hpp"
#include "ii/metric.hpp"

namespace ii {

namespace {

void validate_spec(const Dataset& ds, const LagSpec& spec) {
  if (spec.source_cols.empty() || spec.target_cols.empty()) {
    throw Error("lag spec needs non-empty source and target column sets");
  }
  if (spec.lags.empty()) throw Error("lag spec needs at least one lag");
  for (const auto& c : spec.source_cols) ds.column_index(c);
  for (const auto& c : spec.target_cols) ds.column_index(c);
  if (!ds.has_time()) throw Error("dataset has no time column");
}

}  // namespace

LaggedPairs build_lagged_pairs(const Dataset& ds, const LagSpec& spec,
                               int delta_t) {
  validate_spec(ds, spec);
  const std::size_t n = ds.rows();

  // (group, t) -> row; absent group column means one series
  std::map<std::pair<std::string, std::int64_t>, std::size_t> index;
  for (std::size_t r = 0; r < n; ++r) {
    const std::string g = ds.has_groups() ? ds.group_labels()[r] : "";
    const auto key = std::make_pair(g, ds.time_index()[r]);
    if (!index.emplace(key, r).second) {
      throw Error("duplicate (group, time) key: " + g + ", t=" +
                  std::to_string(key.second));
    }
  }

  std::vector<std::string> source_out = spec.source_cols;
  std::vector<std::string> target_out;
  std::vector<std::string> names = spec.source_cols;
  std::vector<bool> target_is_alias;  // lag-0 overlap with a source column
  for (const auto& c : spec.target_cols) {
    if (delta_t == 0) {
      const bool dup = std::find(source_out.begin(), source_out.end(), c) !=
                       source_out.end();
      target_out.push_back(c);
      target_is_alias.push_back(dup);
      if (!dup) names.push_back(c);
    } else {
      const std::string suffix =
          (delta_t > 0 ? "@+" : "@-") + std::to_string(std::abs(delta_t));
      target_out.push_back(c + suffix);
      target_is_alias.push_back(false);
      names.push_back(c + suffix);
    }
  }

  std::vector<std::size_t> src_idx, tgt_idx;
  for (const auto& c : spec.source_cols) src_idx.push_back(ds.column_index(c));
  for (const auto& c : spec.target_cols) tgt_idx.push_back(ds.column_index(c));

  std::vector<double> values;
  std::vector<std::string> groups;
  std::vector<std::int64_t> times;
  // map iteration is (group, t) lexicographic already
  for (const auto& [key, row] : index) {
    const auto mate = index.find({key.first, key.second + delta_t});
    if (mate == index.end()) continue;
    for (std::size_t f : src_idx) values.push_back(ds.at(row, f));
    for (std::size_t f = 0; f < tgt_idx.size(); ++f) {
      if (target_is_alias[f]) continue;
      values.push_back(ds.at(mate->second, tgt_idx[f]));
    }
    groups.push_back(key.first);
    times.push_back(key.second);
  }

  if (values.size() < 3 * names.size()) {
    throw Error("fewer than 3 paired rows at lag " + std::to_string(delta_t));
  }
  LaggedPairs out{Dataset(std::move(values), names,
                          ds.has_groups() ? std::move(groups)
                                          : std::vector<std::string>{},
                          std::move(times)),
                  std::move(source_out), std::move(target_out)};
  return out;
}

LagScanResult lag_scan(const Dataset& ds, const LagSpec& spec,
                       const ImbalanceOptions& opts) {
  validate_spec(ds, spec);
  std::vector<int> lags = spec.lags;
  std::sort(lags.begin(), lags.end());
  lags.erase(std::unique(lags.begin(), lags.end()), lags.end());

  LagScanResult result;
  double best = 0.0;
  for (int lag : lags) {
    LagPoint pt;
    pt.lag = lag;
    try {
      const LaggedPairs lp = build_lagged_pairs(ds, spec, lag);
      const auto spec_src = DistanceSpec::from_columns(lp.data, lp.source_out);
      const auto spec_tgt = DistanceSpec::from_columns(lp.data, lp.target_out);
      const DistanceMatrix dm_s = pairwise_distances(lp.data, spec_src);
      const DistanceMatrix dm_t = pairwise_distances(lp.data, spec_tgt);
      pt.forward = imbalance_from_matrices(dm_s, dm_t, opts);
      pt.backward = imbalance_from_matrices(dm_t, dm_s, opts);
      pt.pairs = lp.data.rows();
      pt.ok = true;
    } catch (const Error&) {
      pt.ok = false;  // flagged and skipped, not fatal
    }
    if (pt.ok && (!result.has_argmin || pt.forward.delta < best)) {
      best = pt.forward.delta;
      result.has_argmin = true;
      result.argmin_lag = lag;
    }
    result.points.push_back(pt);
  }
  return result;
}

}  // namespace ii
