#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ii {

// Immutable numeric table. Rows containing non-finite values are dropped at
// ingestion and counted in dropped_rows. Safe to share across threads once
// constructed.
class Dataset {
 public:
  Dataset(std::vector<double> values, std::vector<std::string> column_names,
          std::vector<std::string> group_labels = {},
          std::vector<std::int64_t> time_index = {},
          std::size_t dropped_rows = 0);

  std::size_t rows() const { return n_rows_; }
  std::size_t cols() const { return n_cols_; }
  std::size_t dropped_rows() const { return dropped_rows_; }

  double at(std::size_t row, std::size_t col) const {
    return values_[row * n_cols_ + col];
  }
  const double* row_ptr(std::size_t row) const {
    return values_.data() + row * n_cols_;
  }
  const std::vector<double>& values() const { return values_; }

  const std::vector<std::string>& column_names() const { return column_names_; }
  bool has_column(const std::string& name) const;
  std::size_t column_index(const std::string& name) const;  // throws Error

  bool has_groups() const { return !group_labels_.empty(); }
  bool has_time() const { return !time_index_.empty(); }
  const std::vector<std::string>& group_labels() const { return group_labels_; }
  const std::vector<std::int64_t>& time_index() const { return time_index_; }

 private:
  std::vector<double> values_;  // row-major
  std::vector<std::string> column_names_;
  std::vector<std::string> group_labels_;   // empty or length N
  std::vector<std::int64_t> time_index_;    // empty or length N
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::size_t dropped_rows_ = 0;
};

enum class SynthKind { GaussAniso3d, GaussIso4d, Spiral, Sine };

SynthKind synth_kind_from_string(const std::string& name);
std::string to_string(SynthKind kind);

struct SynthSpec {
  SynthKind kind = SynthKind::GaussAniso3d;
  std::size_t n = 0;
  // kind-specific: sigmas for the Gaussians, noise amplitude for spiral/sine.
  // Empty means the documented defaults.
  std::vector<double> params;
  std::uint64_t seed = 0;
};

Dataset load_csv(const std::string& path,
                 const std::optional<std::string>& group_col = std::nullopt,
                 const std::optional<std::string>& time_col = std::nullopt);

void save_csv(const Dataset& ds, const std::string& path);

// Appends numerator/denominator as a new column; rows with denominator == 0
// are dropped and counted.
Dataset derive_ratio(const Dataset& ds, const std::string& numerator,
                     const std::string& denominator,
                     const std::string& new_name);

// Replaces each named column by (x - mean) / sample std. Constant columns
// are an error.
Dataset standardize(const Dataset& ds, const std::vector<std::string>& cols);

// Deterministic synthetic fixtures; a pure function of the spec.
// Column RNG streams are split per column via SplitRng(seed, column).
Dataset synthesize(const SynthSpec& spec);

}  // namespace ii
