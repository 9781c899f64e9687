#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ii/dataset.hpp"

namespace ii {

// A distance measure: ordered feature subset plus per-feature positive
// scales, Euclidean form d(i,j) = sqrt(sum_f (scale_f * (x_if - x_jf))^2).
struct DistanceSpec {
  std::vector<std::size_t> features;
  std::vector<double> scales;  // same length as features

  static DistanceSpec from_columns(const Dataset& ds,
                                   const std::vector<std::string>& names);
  static DistanceSpec from_indices(std::vector<std::size_t> features);

  void validate(const Dataset& ds) const;  // throws Error
  std::vector<std::string> feature_names(const Dataset& ds) const;
};

class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t n) : n_(n), values_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double at(std::size_t i, std::size_t j) const { return values_[i * n_ + j]; }
  void set(std::size_t i, std::size_t j, double d) {
    values_[i * n_ + j] = d;
    values_[j * n_ + i] = d;
  }
  const double* row(std::size_t i) const { return values_.data() + i * n_; }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

inline constexpr std::size_t kDefaultDistanceMatrixBytes =
    std::size_t{2} * 1024 * 1024 * 1024;  // 2 GiB

// Each unordered pair is computed once and mirrored, so symmetry is
// bit-exact. Row blocks run in parallel; output is identical for any
// thread count. Exceeding max_bytes is an error advising subsampling.
DistanceMatrix pairwise_distances(
    const Dataset& ds, const DistanceSpec& spec,
    std::size_t max_bytes = kDefaultDistanceMatrixBytes);

}  // namespace ii
