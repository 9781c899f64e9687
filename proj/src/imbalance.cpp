#include "ii/imbalance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ii/error.hpp"
#include "ii/parallel.hpp"
#include "ii/rank.hpp"
#include "ii/rng.hpp"

namespace ii {

namespace {

// All off-diagonal distances identical means ranks carry no information
// (e.g. a constant feature, where every distance is zero).
void check_not_degenerate(const DistanceMatrix& dm, const char* which) {
  const std::size_t n = dm.size();
  const double ref = dm.at(0, 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (dm.at(i, j) != ref) return;
    }
  }
  throw Error(std::string("degenerate distance measure (space ") + which + ")");
}

std::vector<std::uint32_t> conditioning_points(std::size_t n,
                                               const ImbalanceOptions& opts) {
  std::vector<std::uint32_t> pts(n);
  std::iota(pts.begin(), pts.end(), 0u);
  if (opts.max_conditioning_points == 0 || opts.max_conditioning_points >= n) {
    return pts;
  }
  // seeded Fisher-Yates prefix, then ascending order for a deterministic
  // reduction
  SplitRng rng(opts.seed, 5);
  for (std::size_t i = 0; i < opts.max_conditioning_points; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pts[i], pts[j]);
  }
  pts.resize(opts.max_conditioning_points);
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

ImbalanceEstimate imbalance_from_matrices(const DistanceMatrix& dm_a,
                                          const DistanceMatrix& dm_b,
                                          const ImbalanceOptions& opts) {
  const std::size_t n = dm_a.size();
  if (dm_b.size() != n) throw Error("distance matrix size mismatch");
  if (n < 3) throw Error("need at least 3 points");
  if (opts.k < 1 || static_cast<std::size_t>(opts.k) > n - 2) {
    throw Error("conditioning depth k out of range [1, N-2]");
  }
  check_not_degenerate(dm_a, "A");
  check_not_degenerate(dm_b, "B");

  const auto points = conditioning_points(n, opts);
  const std::size_t k = static_cast<std::size_t>(opts.k);
  std::vector<std::int32_t> ranks_b(points.size() * k, 0);

  parallel_for(points.size(), [&](std::size_t p) {
    const std::size_t i = points[p];
    const auto neighbors = k_nearest(dm_a, i, opts.k);
    for (std::size_t q = 0; q < k; ++q) {
      ranks_b[p * k + q] = rank_by_count(dm_b, i, neighbors[q]);
    }
  });

  // reduce in ascending point-index order
  std::uint64_t sum = 0;
  for (std::int32_t r : ranks_b) sum += static_cast<std::uint64_t>(r);
  const std::size_t pairs = ranks_b.size();
  const double mean_rank = static_cast<double>(sum) / static_cast<double>(pairs);
  const double nd = static_cast<double>(n);

  ImbalanceEstimate est;
  est.n = n;
  est.k = opts.k;
  est.pairs = pairs;
  est.mean_rank = mean_rank;
  est.delta = 2.0 * mean_rank / nd;
  double ss = 0.0;
  for (std::int32_t r : ranks_b) {
    const double e = 2.0 * static_cast<double>(r) / nd - est.delta;
    ss += e * e;
  }
  est.stderr_ = pairs > 1 ? std::sqrt(ss / static_cast<double>(pairs - 1)) /
                                std::sqrt(static_cast<double>(pairs))
                          : 0.0;
  return est;
}

ImbalanceEstimate information_imbalance(const Dataset& ds,
                                        const DistanceSpec& spec_a,
                                        const DistanceSpec& spec_b,
                                        const ImbalanceOptions& opts) {
  const DistanceMatrix dm_a = pairwise_distances(ds, spec_a);
  const DistanceMatrix dm_b = pairwise_distances(ds, spec_b);
  return imbalance_from_matrices(dm_a, dm_b, opts);
}

PlanePoint plane_point(const Dataset& ds, const DistanceSpec& spec_a,
                       const DistanceSpec& spec_b,
                       const ImbalanceOptions& opts, const std::string& label) {
  const DistanceMatrix dm_a = pairwise_distances(ds, spec_a);
  const DistanceMatrix dm_b = pairwise_distances(ds, spec_b);
  PlanePoint pp;
  pp.label = label;
  pp.est_ab = imbalance_from_matrices(dm_a, dm_b, opts);
  pp.est_ba = imbalance_from_matrices(dm_b, dm_a, opts);
  pp.delta_ab = pp.est_ab.delta;
  pp.delta_ba = pp.est_ba.delta;
  return pp;
}

double symmetric_imbalance(double delta_ab, double delta_ba) {
  return (delta_ab + delta_ba) / std::sqrt(2.0);
}

double symmetric_imbalance(const PlanePoint& pp) {
  return symmetric_imbalance(pp.delta_ab, pp.delta_ba);
}

ConditionalHistogram conditional_histogram(const Dataset& ds,
                                           const DistanceSpec& spec_a,
                                           const DistanceSpec& spec_b, int k,
                                           std::size_t bins) {
  if (bins < 1) throw Error("need at least one histogram bin");
  const DistanceMatrix dm_a = pairwise_distances(ds, spec_a);
  const DistanceMatrix dm_b = pairwise_distances(ds, spec_b);
  check_not_degenerate(dm_a, "A");
  check_not_degenerate(dm_b, "B");
  const std::size_t n = ds.rows();
  if (k < 1 || static_cast<std::size_t>(k) > n - 2) {
    throw Error("conditioning depth k out of range [1, N-2]");
  }

  ConditionalHistogram h;
  h.edges.resize(bins + 1);
  // ranks live on {1..N-1}; edge b covers [edge_b, edge_{b+1})
  for (std::size_t b = 0; b <= bins; ++b) {
    h.edges[b] = 1.0 + static_cast<double>(b) * static_cast<double>(n - 1) /
                           static_cast<double>(bins);
  }
  h.counts.assign(bins, 0);

  for (std::size_t i = 0; i < n; ++i) {
    const auto neighbors = k_nearest(dm_a, i, k);
    for (const auto j : neighbors) {
      const std::int32_t r = rank_by_count(dm_b, i, j);
      auto b = static_cast<std::size_t>(
          (static_cast<double>(r) - 1.0) * static_cast<double>(bins) /
          static_cast<double>(n - 1));
      if (b >= bins) b = bins - 1;  // r = N-1 lands in the last bin
      ++h.counts[b];
    }
  }
  h.total = n * static_cast<std::size_t>(k);
  h.frequencies.resize(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    h.frequencies[b] =
        static_cast<double>(h.counts[b]) / static_cast<double>(h.total);
  }
  return h;
}

std::string to_string(Relationship r) {
  switch (r) {
    case Relationship::Equivalent: return "equivalent";
    case Relationship::AContainsB: return "a_contains_b";
    case Relationship::BContainsA: return "b_contains_a";
    case Relationship::SymmetricShared: return "symmetric_shared";
    case Relationship::Independent: return "independent";
  }
  return "?";
}

RelationshipClass classify(const PlanePoint& pp, double tau_low, double gap) {
  if (!(tau_low > 0.0 && tau_low < 1.0) || !(gap > 0.0 && gap < 1.0)) {
    throw Error("classification thresholds must lie in (0, 1)");
  }
  RelationshipClass rc;
  rc.tau_low = tau_low;
  rc.gap = gap;
  const double ab = pp.delta_ab, ba = pp.delta_ba;
  if (ab < tau_low && ba < tau_low) {
    rc.value = Relationship::Equivalent;
  } else if (ab < tau_low && tau_low <= ba && (ba - ab) > gap) {
    rc.value = Relationship::AContainsB;
  } else if (ba < tau_low && tau_low <= ab && (ab - ba) > gap) {
    rc.value = Relationship::BContainsA;
  } else if (ab > 1.0 - tau_low && ba > 1.0 - tau_low) {
    rc.value = Relationship::Independent;
  } else {
    rc.value = Relationship::SymmetricShared;
  }
  return rc;
}

}  // namespace ii
