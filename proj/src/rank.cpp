#include "ii/rank.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <vector>

#include "ii/error.hpp"
#include "ii/parallel.hpp"

namespace ii {

RankMatrix rank_from_distances(const DistanceMatrix& dm) {
  const std::size_t n = dm.size();
  if (n < 3) throw Error("rank matrix needs at least 3 points");
  RankMatrix rm(n);

  std::atomic<std::size_t> tied{0};
  std::atomic<bool> warn{false};
  parallel_for(n, [&](std::size_t i) {
    std::vector<std::uint32_t> order;
    order.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order.push_back(static_cast<std::uint32_t>(j));
    }
    const double* row = dm.row(i);
    // ties broken by ascending point index
    std::sort(order.begin(), order.end(),
              [row](std::uint32_t a, std::uint32_t b) {
                if (row[a] != row[b]) return row[a] < row[b];
                return a < b;
              });
    std::size_t row_ties = 0;
    for (std::size_t p = 0; p < order.size(); ++p) {
      rm.set(i, order[p], static_cast<std::int32_t>(p + 1));
      if (p > 0 && row[order[p]] == row[order[p - 1]]) ++row_ties;
    }
    if (row_ties > 0) tied += row_ties;
    if (100 * row_ties > order.size()) warn = true;
  });
  rm.tied_pairs = tied.load();
  rm.tie_warning = warn.load();
  return rm;
}

ConditionalRankSample nearest_neighbor_pairs(const RankMatrix& rm, int k) {
  const std::size_t n = rm.size();
  if (k < 1 || static_cast<std::size_t>(k) > n - 2) {
    throw Error("conditioning depth k out of range [1, N-2]");
  }
  ConditionalRankSample sample;
  sample.k = k;
  sample.pairs.reserve(n * static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n; ++i) {
    // ordered by (i, rank_a)
    std::vector<std::uint32_t> within(static_cast<std::size_t>(k), 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const std::int32_t r = rm.at(i, j);
      if (r <= k) within[static_cast<std::size_t>(r - 1)] = static_cast<std::uint32_t>(j);
    }
    for (std::int32_t r = 1; r <= k; ++r) {
      RankedPair p;
      p.i = static_cast<std::uint32_t>(i);
      p.j = within[static_cast<std::size_t>(r - 1)];
      p.rank_a = r;
      sample.pairs.push_back(p);
    }
  }
  return sample;
}

ConditionalRankSample conditional_ranks(ConditionalRankSample sample,
                                        const RankMatrix& rm_b) {
  for (auto& p : sample.pairs) {
    if (p.i >= rm_b.size() || p.j >= rm_b.size()) {
      throw Error("rank matrix size mismatch");
    }
    p.rank_b = rm_b.at(p.i, p.j);
  }
  return sample;
}

std::int32_t oracle_rank(const Dataset& ds, const DistanceSpec& spec,
                         std::size_t i, std::size_t j) {
  if (i >= ds.rows() || j >= ds.rows()) throw Error("point index out of range");
  if (i == j) throw Error("rank is undefined for a point against itself");
  const DistanceMatrix dm = pairwise_distances(ds, spec);
  std::vector<std::uint32_t> order;
  for (std::size_t l = 0; l < ds.rows(); ++l) {
    if (l != i) order.push_back(static_cast<std::uint32_t>(l));
  }
  const double* row = dm.row(i);
  std::sort(order.begin(), order.end(),
            [row](std::uint32_t a, std::uint32_t b) {
              if (row[a] != row[b]) return row[a] < row[b];
              return a < b;
            });
  for (std::size_t p = 0; p < order.size(); ++p) {
    if (order[p] == j) return static_cast<std::int32_t>(p + 1);
  }
  throw Error("unreachable");
}

std::vector<std::uint32_t> k_nearest(const DistanceMatrix& dm, std::size_t i,
                                     int k) {
  const std::size_t n = dm.size();
  const double* row = dm.row(i);
  const auto closer = [row](std::uint32_t a, std::uint32_t b) {
    if (row[a] != row[b]) return row[a] < row[b];
    return a < b;
  };
  // keep the k best seen so far; k is tiny in practice
  std::vector<std::uint32_t> best;
  best.reserve(static_cast<std::size_t>(k) + 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const auto cand = static_cast<std::uint32_t>(j);
    auto pos = std::lower_bound(best.begin(), best.end(), cand, closer);
    if (best.size() < static_cast<std::size_t>(k)) {
      best.insert(pos, cand);
    } else if (pos != best.end()) {
      best.insert(pos, cand);
      best.pop_back();
    }
  }
  return best;
}

std::int32_t rank_by_count(const DistanceMatrix& dm, std::size_t i,
                           std::size_t j) {
  const double* row = dm.row(i);
  const double dj = row[j];
  std::int32_t count = 0;
  for (std::size_t l = 0; l < dm.size(); ++l) {
    if (l == i || l == j) continue;
    if (row[l] < dj || (row[l] == dj && l < j)) ++count;
  }
  return count + 1;
}

}  // namespace ii
