#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ii/error.hpp"
#include "ii/rank.hpp"
#include "ii/rng.hpp"
#include "test_util.hpp"

using testutil::random_dataset;

namespace {

ii::RankMatrix ranks_of(const ii::Dataset& ds,
                        const ii::DistanceSpec& spec) {
  return ii::rank_from_distances(ii::pairwise_distances(ds, spec));
}

}  // namespace

TEST_CASE("hand-sorted ranks on 1-D [0,1,3,7]") {
  ii::Dataset ds({0, 1, 3, 7}, {"x"});
  const auto rm = ranks_of(ds, ii::DistanceSpec::from_indices({0}));
  CHECK(rm.at(0, 1) == 1);
  CHECK(rm.at(0, 2) == 2);
  CHECK(rm.at(0, 3) == 3);
  CHECK(ii::oracle_rank(ds, ii::DistanceSpec::from_indices({0}), 0, 3) == 3);
}

TEST_CASE("equidistant neighbors tie-break by ascending index") {
  // from point 0, indices 2 and 5 are both at distance 1
  ii::Dataset ds({0, 10, 1, 20, 30, -1}, {"x"});
  const auto rm = ranks_of(ds, ii::DistanceSpec::from_indices({0}));
  CHECK(rm.at(0, 2) == 1);
  CHECK(rm.at(0, 5) == 2);
  CHECK(rm.tied_pairs > 0);
}

TEST_CASE("every row is a permutation of 1..N-1") {
  const auto ds = random_dataset(40, 3, 8);
  const auto rm = ranks_of(ds, ii::DistanceSpec::from_indices({0, 1, 2}));
  for (std::size_t i = 0; i < 40; ++i) {
    std::vector<int> row;
    for (std::size_t j = 0; j < 40; ++j) {
      if (j != i) row.push_back(rm.at(i, j));
    }
    std::sort(row.begin(), row.end());
    for (std::size_t p = 0; p < row.size(); ++p) {
      CHECK(row[p] == static_cast<int>(p + 1));
    }
  }
}

TEST_CASE("nearest_neighbor_pairs counts and range checks") {
  ii::Dataset ds({0, 1, 3, 7}, {"x"});
  const auto rm = ranks_of(ds, ii::DistanceSpec::from_indices({0}));
  CHECK(ii::nearest_neighbor_pairs(rm, 1).pairs.size() == 4);
  CHECK(ii::nearest_neighbor_pairs(rm, 2).pairs.size() == 8);
  CHECK_THROWS_AS(ii::nearest_neighbor_pairs(rm, 3), ii::Error);  // k = N-1
  CHECK_THROWS_AS(ii::nearest_neighbor_pairs(rm, 0), ii::Error);
}

TEST_CASE("conditional ranks against the same space are the conditioning ranks") {
  const auto ds = random_dataset(30, 2, 3);
  const auto rm = ranks_of(ds, ii::DistanceSpec::from_indices({0, 1}));
  auto sample = ii::conditional_ranks(ii::nearest_neighbor_pairs(rm, 2), rm);
  for (const auto& p : sample.pairs) CHECK(p.rank_b == p.rank_a);
}

TEST_CASE("reflection x -> -x preserves all ranks") {
  const auto ds = random_dataset(50, 1, 12);
  std::vector<double> neg(ds.values());
  for (auto& v : neg) v = -v;
  const ii::Dataset mirrored(std::move(neg), {"c0"});
  const auto rm_a = ranks_of(ds, ii::DistanceSpec::from_indices({0}));
  const auto rm_b = ranks_of(mirrored, ii::DistanceSpec::from_indices({0}));
  const auto sample =
      ii::conditional_ranks(ii::nearest_neighbor_pairs(rm_a, 1), rm_b);
  for (const auto& p : sample.pairs) CHECK(p.rank_b == p.rank_a);
}

TEST_CASE("independent columns give uniform conditional ranks") {
  const std::size_t n = 500;
  const auto ds = random_dataset(n, 2, 77);
  const auto rm_a = ranks_of(ds, ii::DistanceSpec::from_indices({0}));
  const auto rm_b = ranks_of(ds, ii::DistanceSpec::from_indices({1}));
  const auto sample =
      ii::conditional_ranks(ii::nearest_neighbor_pairs(rm_a, 1), rm_b);
  double mean = 0;
  for (const auto& p : sample.pairs) mean += p.rank_b;
  mean /= static_cast<double>(sample.pairs.size());
  // uniform-rank null: mean N/2, sd ~ N/sqrt(12); 3 standard errors
  const double se = (n / std::sqrt(12.0)) / std::sqrt(static_cast<double>(n));
  CHECK(std::abs(mean - n / 2.0) < 3.0 * se);
}

TEST_CASE("oracle agrees with rank_from_distances on every ordered pair") {
  const auto ds = random_dataset(50, 2, 21);
  const auto spec = ii::DistanceSpec::from_indices({0, 1});
  const auto rm = ranks_of(ds, spec);
  for (std::size_t i = 0; i < 50; ++i) {
    for (std::size_t j = 0; j < 50; ++j) {
      if (i == j) continue;
      CHECK(ii::oracle_rank(ds, spec, i, j) == rm.at(i, j));
    }
  }
}

TEST_CASE("oracle rejects i == j") {
  const auto ds = random_dataset(10, 1, 1);
  CHECK_THROWS_AS(ii::oracle_rank(ds, ii::DistanceSpec::from_indices({0}), 2, 2),
                  ii::Error);
}

TEST_CASE("ranks are invariant under uniform scale multiplication") {
  const auto ds = random_dataset(60, 3, 31);
  auto spec = ii::DistanceSpec::from_indices({0, 1, 2});
  const auto base = ranks_of(ds, spec);
  for (double alpha : {1e-3, 4.0, 1e3}) {
    auto scaled = spec;
    for (auto& s : scaled.scales) s *= alpha;
    const auto rm = ranks_of(ds, scaled);
    for (std::size_t i = 0; i < 60; ++i) {
      for (std::size_t j = 0; j < 60; ++j) {
        if (i != j) CHECK(rm.at(i, j) == base.at(i, j));
      }
    }
  }
}

TEST_CASE("row permutation permutes ranks consistently") {
  const std::size_t n = 40;
  const auto ds = random_dataset(n, 2, 41);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  ii::SplitRng rng(5);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::swap(perm[i], perm[i + rng.below(n - i)]);
  }
  std::vector<double> shuffled(n * 2);
  for (std::size_t r = 0; r < n; ++r) {
    shuffled[r * 2] = ds.at(perm[r], 0);
    shuffled[r * 2 + 1] = ds.at(perm[r], 1);
  }
  const ii::Dataset ds2(std::move(shuffled), {"c0", "c1"});
  const auto spec = ii::DistanceSpec::from_indices({0, 1});
  const auto rm = ranks_of(ds, spec);
  const auto rm2 = ranks_of(ds2, spec);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) CHECK(rm2.at(i, j) == rm.at(perm[i], perm[j]));
    }
  }
}

TEST_CASE("k_nearest and rank_by_count match the full sort") {
  const auto ds = random_dataset(80, 2, 55);
  const auto dm = ii::pairwise_distances(ds, ii::DistanceSpec::from_indices({0, 1}));
  const auto rm = ii::rank_from_distances(dm);
  for (std::size_t i = 0; i < 80; ++i) {
    const auto nn = ii::k_nearest(dm, i, 3);
    REQUIRE(nn.size() == 3);
    for (std::size_t q = 0; q < 3; ++q) {
      CHECK(rm.at(i, nn[q]) == static_cast<int>(q + 1));
    }
    for (std::size_t j = 0; j < 80; ++j) {
      if (j != i) CHECK(ii::rank_by_count(dm, i, j) == rm.at(i, j));
    }
  }
}
