#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ii/metric.hpp"

namespace ii {

struct ImbalanceOptions {
  // Conditioning depth; 1 is the definition, larger values are an extension
  // and are flagged as such in all outputs.
  int k = 1;
  // When > 0 and smaller than N, conditioning points are subsampled
  // uniformly without replacement (seeded). Intended for N > 20000.
  std::size_t max_conditioning_points = 0;
  std::uint64_t seed = 0;
};

struct ImbalanceEstimate {
  double delta = 0.0;      // 2 * mean_rank / n
  std::size_t n = 0;       // dataset size
  int k = 1;
  double mean_rank = 0.0;  // <r_B | r_A <= k>
  double stderr_ = 0.0;    // std error over per-pair contributions 2 r_B / n
  std::size_t pairs = 0;   // conditioning pairs used
};

struct PlanePoint {
  double delta_ab = 0.0;
  double delta_ba = 0.0;
  std::string label;
  ImbalanceEstimate est_ab;
  ImbalanceEstimate est_ba;
};

enum class Relationship {
  Equivalent,
  AContainsB,
  BContainsA,
  SymmetricShared,
  Independent,
};

std::string to_string(Relationship r);

struct RelationshipClass {
  Relationship value = Relationship::SymmetricShared;
  double tau_low = 0.25;
  double gap = 0.25;
};

struct ConditionalHistogram {
  std::vector<double> edges;        // bins + 1 edges over ranks [1, N)
  std::vector<std::size_t> counts;
  std::vector<double> frequencies;  // counts / total
  std::size_t total = 0;
};

// Core estimator over prebuilt distance matrices. Per-point contributions
// are computed concurrently and reduced in ascending point index, so the
// result is bit-identical for any thread count and equals the value
// obtained through a full RankMatrix.
ImbalanceEstimate imbalance_from_matrices(const DistanceMatrix& dm_a,
                                          const DistanceMatrix& dm_b,
                                          const ImbalanceOptions& opts = {});

ImbalanceEstimate information_imbalance(const Dataset& ds,
                                        const DistanceSpec& spec_a,
                                        const DistanceSpec& spec_b,
                                        const ImbalanceOptions& opts = {});

PlanePoint plane_point(const Dataset& ds, const DistanceSpec& spec_a,
                       const DistanceSpec& spec_b,
                       const ImbalanceOptions& opts = {},
                       const std::string& label = "");

// (delta_ab + delta_ba) / sqrt(2)
double symmetric_imbalance(const PlanePoint& pp);
double symmetric_imbalance(double delta_ab, double delta_ba);

ConditionalHistogram conditional_histogram(const Dataset& ds,
                                           const DistanceSpec& spec_a,
                                           const DistanceSpec& spec_b,
                                           int k, std::size_t bins);

// Thresholds are always echoed in the result, never silently applied.
RelationshipClass classify(const PlanePoint& pp, double tau_low = 0.25,
                           double gap = 0.25);

}  // namespace ii
