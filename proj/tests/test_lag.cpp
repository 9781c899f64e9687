#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "ii/error.hpp"
#include "ii/lag.hpp"
#include "ii/rng.hpp"

namespace {

// one group, times 1..T, x_t = t, y_t = 10 t
ii::Dataset simple_series(std::size_t T) {
  std::vector<double> values;
  std::vector<std::string> groups;
  std::vector<std::int64_t> times;
  for (std::size_t t = 1; t <= T; ++t) {
    values.push_back(static_cast<double>(t));
    values.push_back(10.0 * static_cast<double>(t));
    groups.push_back("g");
    times.push_back(static_cast<std::int64_t>(t));
  }
  return ii::Dataset(std::move(values), {"x", "y"}, std::move(groups),
                     std::move(times));
}

// panel with AR(1) driver x and y_{t+1} = 0.9 x_t + noise
ii::Dataset causal_panel(std::size_t n_groups, std::size_t steps,
                         std::uint64_t seed) {
  std::vector<double> values;
  std::vector<std::string> groups;
  std::vector<std::int64_t> times;
  for (std::size_t g = 0; g < n_groups; ++g) {
    ii::SplitRng rx(seed, 2 * g), rn(seed, 2 * g + 1);
    double prev_x = rx.normal();
    for (std::size_t t = 0; t < steps; ++t) {
      const double x = 0.8 * prev_x + 0.6 * rx.normal();
      const double y = 0.9 * prev_x + 0.1 * rn.normal();
      prev_x = x;
      values.push_back(x);
      values.push_back(y);
      groups.push_back("g" + std::to_string(g));
      times.push_back(static_cast<std::int64_t>(t));
    }
  }
  return ii::Dataset(std::move(values), {"x", "y"}, std::move(groups),
                     std::move(times));
}

}  // namespace

TEST_CASE("lag join counts for a contiguous series") {
  const auto ds = simple_series(5);
  ii::LagSpec spec;
  spec.source_cols = {"x"};
  spec.target_cols = {"y"};
  spec.lags = {1};
  const auto lp = ii::build_lagged_pairs(ds, spec, 1);
  CHECK(lp.data.rows() == 4);
  CHECK(lp.source_out == std::vector<std::string>{"x"});
  CHECK(lp.target_out == std::vector<std::string>{"y@+1"});
  // row (g, t=1): x at t=1, y at t=2
  CHECK(lp.data.at(0, 0) == 1.0);
  CHECK(lp.data.at(0, 1) == 20.0);
}

TEST_CASE("lag 0 restricts to the source and target columns") {
  const auto ds = simple_series(5);
  ii::LagSpec spec;
  spec.source_cols = {"x", "y"};
  spec.target_cols = {"y"};
  spec.lags = {0};
  const auto lp = ii::build_lagged_pairs(ds, spec, 0);
  CHECK(lp.data.rows() == 5);
  CHECK(lp.data.cols() == 2);  // y appears once
  CHECK(lp.target_out == std::vector<std::string>{"y"});
  for (std::size_t r = 0; r < 5; ++r) {
    CHECK(lp.data.at(r, 0) == ds.at(r, 0));
    CHECK(lp.data.at(r, 1) == ds.at(r, 1));
  }
}

TEST_CASE("groups without valid pairs contribute nothing") {
  // group a: times 1..5; group b: times 10, 20, 30 (gaps > 1)
  std::vector<double> values;
  std::vector<std::string> groups;
  std::vector<std::int64_t> times;
  for (int t = 1; t <= 5; ++t) {
    values.push_back(t);
    values.push_back(2.0 * t);
    groups.push_back("a");
    times.push_back(t);
  }
  for (int t : {10, 20, 30}) {
    values.push_back(t);
    values.push_back(3.0 * t);
    groups.push_back("b");
    times.push_back(t);
  }
  const ii::Dataset ds(std::move(values), {"x", "y"}, std::move(groups),
                       std::move(times));
  ii::LagSpec spec;
  spec.source_cols = {"x"};
  spec.target_cols = {"y"};
  spec.lags = {1};
  const auto lp = ii::build_lagged_pairs(ds, spec, 1);
  CHECK(lp.data.rows() == 4);
  for (std::size_t r = 0; r < lp.data.rows(); ++r) {
    CHECK(lp.data.group_labels()[r] == "a");
  }
}

TEST_CASE("duplicate (group, t) keys are rejected") {
  std::vector<double> values = {1, 2, 3, 4, 5, 6};
  const ii::Dataset ds(std::move(values), {"x"},
                       {"g", "g", "g", "g", "g", "g"}, {1, 2, 2, 3, 4, 5});
  ii::LagSpec spec;
  spec.source_cols = {"x"};
  spec.target_cols = {"x"};
  spec.lags = {1};
  CHECK_THROWS_WITH_AS(ii::build_lagged_pairs(ds, spec, 1),
                       doctest::Contains("duplicate"), ii::Error);
}

TEST_CASE("paired counts match the closed form") {
  const auto ds = causal_panel(4, 12, 3);
  ii::LagSpec spec;
  spec.source_cols = {"x"};
  spec.target_cols = {"y"};
  spec.lags = {0};
  for (int dt : {-3, -1, 0, 2, 5}) {
    const auto lp = ii::build_lagged_pairs(ds, spec, dt);
    CHECK(lp.data.rows() == 4 * (12 - static_cast<std::size_t>(std::abs(dt))));
  }
}

TEST_CASE("time reversal with swapped roles exchanges the imbalances") {
  const auto ds = causal_panel(6, 20, 9);
  ii::LagSpec fwd;
  fwd.source_cols = {"x"};
  fwd.target_cols = {"y"};
  fwd.lags = {2};
  ii::LagSpec rev;
  rev.source_cols = {"y"};
  rev.target_cols = {"x"};
  rev.lags = {-2};
  const auto a = ii::lag_scan(ds, fwd);
  const auto b = ii::lag_scan(ds, rev);
  REQUIRE(a.points[0].ok);
  REQUIRE(b.points[0].ok);
  CHECK(a.points[0].pairs == b.points[0].pairs);
  CHECK(a.points[0].forward.delta == b.points[0].backward.delta);
  CHECK(a.points[0].backward.delta == b.points[0].forward.delta);
}

TEST_CASE("constructed causal lag is found at +1 with time asymmetry") {
  const auto ds = causal_panel(10, 40, 21);
  ii::LagSpec spec;
  spec.source_cols = {"x"};
  spec.target_cols = {"y"};
  spec.lags = {-3, -2, -1, 0, 1, 2, 3};
  const auto scan = ii::lag_scan(ds, spec);
  REQUIRE(scan.has_argmin);
  CHECK(scan.argmin_lag == 1);
  for (int dt : {1, 2, 3}) {
    double fwd = 0, bwd = 0;
    for (const auto& p : scan.points) {
      if (p.lag == dt) fwd = p.forward.delta;
      if (p.lag == -dt) bwd = p.forward.delta;
    }
    CHECK(fwd < bwd);
  }
}

TEST_CASE("lags with too few pairs are flagged, not fatal") {
  const auto ds = simple_series(5);
  ii::LagSpec spec;
  spec.source_cols = {"x"};
  spec.target_cols = {"y"};
  spec.lags = {1, 4, 10};
  const auto scan = ii::lag_scan(ds, spec);
  REQUIRE(scan.points.size() == 3);
  CHECK(scan.points[0].ok);
  CHECK_FALSE(scan.points[1].ok);  // 1 pair at lag 4
  CHECK_FALSE(scan.points[2].ok);
  CHECK(scan.has_argmin);
  CHECK(scan.argmin_lag == 1);
}

TEST_CASE("lag spec validation") {
  const auto ds = simple_series(5);
  ii::LagSpec spec;
  spec.lags = {1};
  CHECK_THROWS_AS(ii::lag_scan(ds, spec), ii::Error);  // empty columns
  spec.source_cols = {"x"};
  spec.target_cols = {"missing"};
  CHECK_THROWS_AS(ii::lag_scan(ds, spec), ii::Error);
  ii::Dataset no_time({1, 2, 3}, {"x"});
  spec.target_cols = {"x"};
  CHECK_THROWS_AS(ii::lag_scan(no_time, spec), ii::Error);
}
