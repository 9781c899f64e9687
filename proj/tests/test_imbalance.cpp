#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ii/error.hpp"
#include "ii/imbalance.hpp"
#include "ii/rank.hpp"
#include "ii/rng.hpp"
#include "test_util.hpp"

using testutil::gauss_dataset;
using testutil::random_dataset;

namespace {

// Independent route: full rank matrices, conditioning pairs, plain average.
double brute_force_delta(const ii::Dataset& ds, const ii::DistanceSpec& a,
                         const ii::DistanceSpec& b, int k = 1) {
  const auto rm_a = ii::rank_from_distances(ii::pairwise_distances(ds, a));
  const auto rm_b = ii::rank_from_distances(ii::pairwise_distances(ds, b));
  const auto sample =
      ii::conditional_ranks(ii::nearest_neighbor_pairs(rm_a, k), rm_b);
  std::uint64_t sum = 0;
  for (const auto& p : sample.pairs) sum += static_cast<std::uint64_t>(p.rank_b);
  const double mean =
      static_cast<double>(sum) / static_cast<double>(sample.pairs.size());
  return 2.0 * mean / static_cast<double>(ds.rows());
}

}  // namespace

TEST_CASE("identity law: delta(A->A) = 2/N exactly") {
  const auto ds = random_dataset(100, 3, 2);
  const auto spec = ii::DistanceSpec::from_indices({0, 1, 2});
  const auto est = ii::information_imbalance(ds, spec, spec);
  CHECK(est.delta == 2.0 / 100.0);
  CHECK(est.mean_rank == 1.0);
  CHECK(est.stderr_ == 0.0);
  CHECK(est.delta == 2.0 * est.mean_rank / static_cast<double>(est.n));
}

TEST_CASE("independent normal columns give delta near 1") {
  const auto ds = gauss_dataset(1000, {"x", "y"}, 42);
  const auto est = ii::information_imbalance(
      ds, ii::DistanceSpec::from_indices({0}), ii::DistanceSpec::from_indices({1}));
  CHECK(est.delta > 0.9);
  CHECK(est.delta < 1.1);
}

TEST_CASE("estimator bounds hold for k=1") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto ds = random_dataset(60, 2, seed);
    const auto est = ii::information_imbalance(
        ds, ii::DistanceSpec::from_indices({0}),
        ii::DistanceSpec::from_indices({1}));
    const double n = 60.0;
    CHECK(est.delta >= 2.0 / n);
    CHECK(est.delta <= 2.0 * (n - 1.0) / n);
  }
}

TEST_CASE("scale changes leave the estimate bit-identical") {
  const auto ds = random_dataset(120, 4, 9);
  const auto a = ii::DistanceSpec::from_indices({0, 1});
  const auto b = ii::DistanceSpec::from_indices({2, 3});
  const double base = ii::information_imbalance(ds, a, b).delta;
  for (double alpha : {1e-3, 1e3}) {
    auto a2 = a;
    for (auto& s : a2.scales) s *= alpha;
    CHECK(ii::information_imbalance(ds, a2, b).delta == base);
    auto b2 = b;
    for (auto& s : b2.scales) s *= alpha;
    CHECK(ii::information_imbalance(ds, a, b2).delta == base);
  }
}

TEST_CASE("fast path equals the full-sort route bit-identically") {
  ii::SplitRng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 10 + rng.below(190);
    const std::size_t d = 2 + rng.below(3);
    const auto ds = random_dataset(n, d, 1000 + trial);
    const auto a = ii::DistanceSpec::from_indices({0});
    const auto b = ii::DistanceSpec::from_indices({1});
    CHECK(ii::information_imbalance(ds, a, b).delta ==
          brute_force_delta(ds, a, b));
  }
}

TEST_CASE("plane point swap exchanges the components exactly") {
  const auto ds = random_dataset(80, 3, 77);
  const auto a = ii::DistanceSpec::from_indices({0, 1});
  const auto b = ii::DistanceSpec::from_indices({2});
  const auto pp = ii::plane_point(ds, a, b);
  const auto qq = ii::plane_point(ds, b, a);
  CHECK(pp.delta_ab == qq.delta_ba);
  CHECK(pp.delta_ba == qq.delta_ab);
}

TEST_CASE("row shuffling does not change the estimate on tie-free data") {
  const std::size_t n = 100;
  const auto ds = random_dataset(n, 2, 13);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  ii::SplitRng rng(7);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::swap(perm[i], perm[i + rng.below(n - i)]);
  }
  std::vector<double> shuffled(n * 2);
  for (std::size_t r = 0; r < n; ++r) {
    shuffled[r * 2] = ds.at(perm[r], 0);
    shuffled[r * 2 + 1] = ds.at(perm[r], 1);
  }
  const ii::Dataset ds2(std::move(shuffled), {"c0", "c1"});
  const auto a = ii::DistanceSpec::from_indices({0});
  const auto b = ii::DistanceSpec::from_indices({1});
  CHECK(ii::information_imbalance(ds, a, b).delta ==
        ii::information_imbalance(ds2, a, b).delta);
}

TEST_CASE("symmetric imbalance formula") {
  CHECK(ii::symmetric_imbalance(0.1, 0.1) == doctest::Approx(0.2 / std::sqrt(2.0)));
  CHECK(ii::symmetric_imbalance(0.02, 0.02) == doctest::Approx(0.04 / std::sqrt(2.0)));
  CHECK(ii::symmetric_imbalance(1.0, 1.0) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("degenerate spaces are rejected") {
  ii::Dataset ds({1, 0, 1, 1, 1, 2, 1, 3}, {"k", "x"});  // k constant
  CHECK_THROWS_WITH_AS(
      ii::information_imbalance(ds, ii::DistanceSpec::from_indices({0}),
                                ii::DistanceSpec::from_indices({1})),
      doctest::Contains("degenerate"), ii::Error);
}

TEST_CASE("conditional histogram: identical spaces put all mass in bin 1") {
  const auto ds = random_dataset(100, 2, 4);
  const auto spec = ii::DistanceSpec::from_indices({0, 1});
  const auto h = ii::conditional_histogram(ds, spec, spec, 1, 10);
  CHECK(h.counts[0] == 100);
  for (std::size_t b = 1; b < 10; ++b) CHECK(h.counts[b] == 0);
  double total = 0;
  for (double f : h.frequencies) total += f;
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("conditional histogram: independent columns are near-uniform") {
  const std::size_t n = 1000, bins = 10;
  const auto ds = gauss_dataset(n, {"x", "y"}, 3);
  const auto h = ii::conditional_histogram(ds, ii::DistanceSpec::from_indices({0}),
                                           ii::DistanceSpec::from_indices({1}),
                                           1, bins);
  // per-bin count ~ Binomial(n, 1/bins); 4 standard deviations
  const double expect = static_cast<double>(n) / bins;
  const double sd = std::sqrt(expect * (1.0 - 1.0 / bins));
  for (std::size_t b = 0; b < bins; ++b) {
    CHECK(std::abs(static_cast<double>(h.counts[b]) - expect) < 4.0 * sd);
  }
}

TEST_CASE("anisotropic Gaussian: xy->x more peaked than x->xy") {
  ii::SynthSpec spec;
  spec.kind = ii::SynthKind::GaussAniso3d;
  spec.n = 1000;
  spec.seed = 7;
  const auto ds = ii::synthesize(spec);
  const auto xy = ii::DistanceSpec::from_columns(ds, {"x", "y"});
  const auto x = ii::DistanceSpec::from_columns(ds, {"x"});
  const auto fwd = ii::conditional_histogram(ds, xy, x, 1, 20);
  const auto rev = ii::conditional_histogram(ds, x, xy, 1, 20);
  CHECK(fwd.frequencies[0] > rev.frequencies[0]);
}

TEST_CASE("classification rules") {
  ii::PlanePoint pp;
  pp.delta_ab = 0.03;
  pp.delta_ba = 0.05;
  CHECK(ii::classify(pp).value == ii::Relationship::Equivalent);
  pp.delta_ab = 0.08;
  pp.delta_ba = 0.9;
  CHECK(ii::classify(pp).value == ii::Relationship::AContainsB);
  pp.delta_ab = 0.9;
  pp.delta_ba = 0.08;
  CHECK(ii::classify(pp).value == ii::Relationship::BContainsA);
  pp.delta_ab = 0.97;
  pp.delta_ba = 0.99;
  CHECK(ii::classify(pp).value == ii::Relationship::Independent);
  pp.delta_ab = 0.4;
  pp.delta_ba = 0.45;
  CHECK(ii::classify(pp).value == ii::Relationship::SymmetricShared);
  CHECK_THROWS_AS(ii::classify(pp, 1.5, 0.25), ii::Error);
  CHECK_THROWS_AS(ii::classify(pp, 0.25, 0.0), ii::Error);
}

TEST_CASE("conditioning-point subsampling is deterministic and sane") {
  const auto ds = gauss_dataset(400, {"x", "y"}, 8);
  ii::ImbalanceOptions opts;
  opts.max_conditioning_points = 100;
  opts.seed = 5;
  const auto a = ii::DistanceSpec::from_indices({0});
  const auto b = ii::DistanceSpec::from_indices({1});
  const auto e1 = ii::information_imbalance(ds, a, b, opts);
  const auto e2 = ii::information_imbalance(ds, a, b, opts);
  CHECK(e1.pairs == 100);
  CHECK(e1.delta == e2.delta);
  CHECK(e1.delta > 0.7);  // still near the independence value
  CHECK(e1.delta < 1.3);
}

TEST_CASE("k > 1 uses N*k conditioning pairs") {
  const auto ds = random_dataset(50, 2, 6);
  ii::ImbalanceOptions opts;
  opts.k = 3;
  const auto est = ii::information_imbalance(
      ds, ii::DistanceSpec::from_indices({0}),
      ii::DistanceSpec::from_indices({1}), opts);
  CHECK(est.pairs == 150);
  CHECK(est.k == 3);
}
