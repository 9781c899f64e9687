#pragma once

#include <cstdint>
#include <vector>

#include "ii/metric.hpp"

namespace ii {

// Neighbor ranks r_ij in {1..N-1}: position of j in the ascending sort of
// row i's distances, ties broken by ascending point index, self excluded.
class RankMatrix {
 public:
  explicit RankMatrix(std::size_t n) : n_(n), ranks_(n * n, 0) {}

  std::size_t size() const { return n_; }
  std::int32_t at(std::size_t i, std::size_t j) const {
    return ranks_[i * n_ + j];
  }
  void set(std::size_t i, std::size_t j, std::int32_t r) {
    ranks_[i * n_ + j] = r;
  }

  // Tie diagnostics: total tied (adjacent-equal) pairs and whether any row
  // had more than 1% of its pairs tied, a symptom of constant or
  // discretized features.
  std::size_t tied_pairs = 0;
  bool tie_warning = false;

 private:
  std::size_t n_;
  std::vector<std::int32_t> ranks_;
};

struct RankedPair {
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  std::int32_t rank_a = 0;
  std::int32_t rank_b = 0;  // unfilled in a skeleton
};

struct ConditionalRankSample {
  std::vector<RankedPair> pairs;  // ordered by (i, rank_a)
  int k = 1;
};

RankMatrix rank_from_distances(const DistanceMatrix& dm);

// Skeleton of pairs with r_A <= k, rank_b unfilled (0).
ConditionalRankSample nearest_neighbor_pairs(const RankMatrix& rm, int k);

// Fills rank_b from rm_b; both matrices must be over the same row order.
ConditionalRankSample conditional_ranks(ConditionalRankSample sample,
                                        const RankMatrix& rm_b);

// Naive full-sort recomputation of a single rank; the test oracle.
std::int32_t oracle_rank(const Dataset& ds, const DistanceSpec& spec,
                         std::size_t i, std::size_t j);

// Order-statistic helpers used by the fast imbalance path. Both use the
// same (distance, index) comparator as rank_from_distances, so ranks agree
// bit-for-bit with the full-sort route.
std::vector<std::uint32_t> k_nearest(const DistanceMatrix& dm, std::size_t i,
                                     int k);
std::int32_t rank_by_count(const DistanceMatrix& dm, std::size_t i,
                           std::size_t j);

}  // namespace ii
