#include "ii/metric.hpp"

#include <cmath>
#include <unordered_set>

#include "ii/error.hpp"
#include "ii/parallel.hpp"

namespace ii {

DistanceSpec DistanceSpec::from_columns(const Dataset& ds,
                                        const std::vector<std::string>& names) {
  DistanceSpec spec;
  for (const auto& n : names) spec.features.push_back(ds.column_index(n));
  spec.scales.assign(spec.features.size(), 1.0);
  spec.validate(ds);
  return spec;
}

DistanceSpec DistanceSpec::from_indices(std::vector<std::size_t> features) {
  DistanceSpec spec;
  spec.scales.assign(features.size(), 1.0);
  spec.features = std::move(features);
  return spec;
}

void DistanceSpec::validate(const Dataset& ds) const {
  if (features.empty()) throw Error("distance spec has no features");
  if (scales.size() != features.size()) {
    throw Error("distance spec: scales and features differ in length");
  }
  std::unordered_set<std::size_t> seen;
  for (std::size_t f : features) {
    if (f >= ds.cols()) throw Error("invalid feature index in distance spec");
    if (!seen.insert(f).second) throw Error("duplicate feature in distance spec");
  }
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw Error("distance spec scales must be positive and finite");
    }
  }
}

std::vector<std::string> DistanceSpec::feature_names(const Dataset& ds) const {
  std::vector<std::string> out;
  out.reserve(features.size());
  for (std::size_t f : features) out.push_back(ds.column_names()[f]);
  return out;
}

DistanceMatrix pairwise_distances(const Dataset& ds, const DistanceSpec& spec,
                                  std::size_t max_bytes) {
  spec.validate(ds);
  const std::size_t n = ds.rows();
  if (n * n * sizeof(double) > max_bytes) {
    throw Error(
        "distance matrix would exceed the memory bound; subsample the "
        "dataset or raise the limit");
  }
  DistanceMatrix dm(n);
  const std::size_t d = spec.features.size();

  // Row-block parallelism; each unordered pair is written from the
  // iteration that owns its smaller index, with a fixed feature summation
  // order, so the matrix is identical for any thread count.
  parallel_for(n, [&](std::size_t i) {
    const double* ri = ds.row_ptr(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* rj = ds.row_ptr(j);
      double s = 0.0;
      for (std::size_t f = 0; f < d; ++f) {
        const double t = spec.scales[f] * (ri[spec.features[f]] - rj[spec.features[f]]);
        s += t * t;
      }
      dm.set(i, j, std::sqrt(s));
    }
  });
  return dm;
}

}  // namespace ii
