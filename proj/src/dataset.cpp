#include "ii/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "ii/error.hpp"
#include "ii/rng.hpp"

namespace ii {

namespace {

void check_unique_names(const std::vector<std::string>& names) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) {
      throw Error("duplicate column name: " + n);
    }
  }
}

}  // namespace

Dataset::Dataset(std::vector<double> values,
                 std::vector<std::string> column_names,
                 std::vector<std::string> group_labels,
                 std::vector<std::int64_t> time_index,
                 std::size_t dropped_rows)
    : values_(std::move(values)),
      column_names_(std::move(column_names)),
      group_labels_(std::move(group_labels)),
      time_index_(std::move(time_index)),
      dropped_rows_(dropped_rows) {
  n_cols_ = column_names_.size();
  if (n_cols_ == 0) throw Error("dataset needs at least one column");
  if (values_.size() % n_cols_ != 0) {
    throw Error("value buffer size is not a multiple of the column count");
  }
  n_rows_ = values_.size() / n_cols_;
  if (n_rows_ < 3) throw Error("insufficient rows: need at least 3 usable rows");
  check_unique_names(column_names_);
  if (!group_labels_.empty() && group_labels_.size() != n_rows_) {
    throw Error("group labels length does not match row count");
  }
  if (!time_index_.empty() && time_index_.size() != n_rows_) {
    throw Error("time index length does not match row count");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error("non-finite value in dataset");
  }
}

bool Dataset::has_column(const std::string& name) const {
  return std::find(column_names_.begin(), column_names_.end(), name) !=
         column_names_.end();
}

std::size_t Dataset::column_index(const std::string& name) const {
  auto it = std::find(column_names_.begin(), column_names_.end(), name);
  if (it == column_names_.end()) throw Error("unknown column: " + name);
  return static_cast<std::size_t>(it - column_names_.begin());
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

bool parse_real(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return false;
  if (!std::isfinite(v)) return false;
  *out = v;
  return true;
}

bool parse_int(const std::string& s, std::int64_t* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (end != s.c_str() + s.size()) return false;
  *out = v;
  return true;
}

}  // namespace

Dataset load_csv(const std::string& path,
                 const std::optional<std::string>& group_col,
                 const std::optional<std::string>& time_col) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw Error("empty file: " + path);
  const auto header = split_line(line);
  check_unique_names(header);

  std::ptrdiff_t group_idx = -1, time_idx = -1;
  std::vector<std::string> value_names;
  std::vector<std::size_t> value_cols;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (group_col && header[c] == *group_col) {
      group_idx = static_cast<std::ptrdiff_t>(c);
    } else if (time_col && header[c] == *time_col) {
      time_idx = static_cast<std::ptrdiff_t>(c);
    } else {
      value_names.push_back(header[c]);
      value_cols.push_back(c);
    }
  }
  if (group_col && group_idx < 0) throw Error("group column absent: " + *group_col);
  if (time_col && time_idx < 0) throw Error("time column absent: " + *time_col);
  if (value_names.empty()) throw Error("no numeric columns in " + path);

  std::vector<double> values;
  std::vector<std::string> groups;
  std::vector<std::int64_t> times;
  std::size_t dropped = 0;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      ++dropped;
      continue;
    }
    std::vector<double> row(value_cols.size());
    bool ok = true;
    for (std::size_t f = 0; f < value_cols.size() && ok; ++f) {
      ok = parse_real(cells[value_cols[f]], &row[f]);
    }
    std::int64_t t = 0;
    if (ok && time_idx >= 0) ok = parse_int(cells[time_idx], &t);
    if (!ok) {
      ++dropped;
      continue;
    }
    values.insert(values.end(), row.begin(), row.end());
    if (group_idx >= 0) groups.push_back(cells[group_idx]);
    if (time_idx >= 0) times.push_back(t);
  }

  if (values.size() / value_names.size() < 3) {
    throw Error("insufficient rows: need at least 3 usable rows in " + path);
  }
  return Dataset(std::move(values), std::move(value_names), std::move(groups),
                 std::move(times), dropped);
}

void save_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write file: " + path);
  bool first = true;
  if (ds.has_groups()) {
    out << "group";
    first = false;
  }
  if (ds.has_time()) {
    out << (first ? "" : ",") << "t";
    first = false;
  }
  for (const auto& name : ds.column_names()) {
    out << (first ? "" : ",") << name;
    first = false;
  }
  out << "\n";
  char buf[32];
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    first = true;
    if (ds.has_groups()) {
      out << ds.group_labels()[r];
      first = false;
    }
    if (ds.has_time()) {
      out << (first ? "" : ",") << ds.time_index()[r];
      first = false;
    }
    for (std::size_t c = 0; c < ds.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", ds.at(r, c));
      out << (first ? "" : ",") << buf;
      first = false;
    }
    out << "\n";
  }
}

Dataset derive_ratio(const Dataset& ds, const std::string& numerator,
                     const std::string& denominator,
                     const std::string& new_name) {
  const std::size_t num = ds.column_index(numerator);
  const std::size_t den = ds.column_index(denominator);
  if (ds.has_column(new_name)) throw Error("name collision: " + new_name);

  const std::size_t d = ds.cols();
  std::vector<double> values;
  std::vector<std::string> groups;
  std::vector<std::int64_t> times;
  std::size_t dropped = 0;
  for (std::size_t r = 0; r < ds.rows(); ++r) {
    if (ds.at(r, den) == 0.0) {
      ++dropped;
      continue;
    }
    for (std::size_t c = 0; c < d; ++c) values.push_back(ds.at(r, c));
    values.push_back(ds.at(r, num) / ds.at(r, den));
    if (ds.has_groups()) groups.push_back(ds.group_labels()[r]);
    if (ds.has_time()) times.push_back(ds.time_index()[r]);
  }
  if (values.empty()) throw Error("all rows dropped: denominator is zero everywhere");

  auto names = ds.column_names();
  names.push_back(new_name);
  return Dataset(std::move(values), std::move(names), std::move(groups),
                 std::move(times), ds.dropped_rows() + dropped);
}

Dataset standardize(const Dataset& ds, const std::vector<std::string>& cols) {
  std::vector<double> values = ds.values();
  const std::size_t n = ds.rows(), d = ds.cols();
  for (const auto& name : cols) {
    const std::size_t c = ds.column_index(name);
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += values[r * d + c];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double e = values[r * d + c] - mean;
      ss += e * e;
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) throw Error("zero variance: " + name);
    for (std::size_t r = 0; r < n; ++r) {
      values[r * d + c] = (values[r * d + c] - mean) / sd;
    }
  }
  return Dataset(std::move(values), ds.column_names(), ds.group_labels(),
                 ds.time_index(), ds.dropped_rows());
}

SynthKind synth_kind_from_string(const std::string& name) {
  if (name == "gauss-aniso-3d") return SynthKind::GaussAniso3d;
  if (name == "gauss-iso-4d") return SynthKind::GaussIso4d;
  if (name == "spiral") return SynthKind::Spiral;
  if (name == "sine") return SynthKind::Sine;
  throw Error("unknown synthetic kind: " + name);
}

std::string to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::GaussAniso3d: return "gauss-aniso-3d";
    case SynthKind::GaussIso4d: return "gauss-iso-4d";
    case SynthKind::Spiral: return "spiral";
    case SynthKind::Sine: return "sine";
  }
  return "?";
}

Dataset synthesize(const SynthSpec& spec) {
  if (spec.n < 3) throw Error("synthetic dataset needs n >= 3");
  const std::size_t n = spec.n;

  switch (spec.kind) {
    case SynthKind::GaussAniso3d: {
      std::vector<double> sigmas = spec.params;
      if (sigmas.empty()) sigmas = {1.0, 1.0, 0.1};
      if (sigmas.size() != 3) throw Error("gauss-aniso-3d takes 3 sigmas");
      for (double s : sigmas) {
        if (!(s > 0.0)) throw Error("sigmas must be positive");
      }
      std::vector<double> values(n * 3);
      for (std::size_t c = 0; c < 3; ++c) {
        SplitRng rng(spec.seed, c);
        for (std::size_t r = 0; r < n; ++r) {
          values[r * 3 + c] = sigmas[c] * rng.normal();
        }
      }
      return Dataset(std::move(values), {"x", "y", "z"});
    }
    case SynthKind::GaussIso4d: {
      if (!spec.params.empty()) throw Error("gauss-iso-4d takes no parameters");
      std::vector<double> values(n * 4);
      for (std::size_t c = 0; c < 4; ++c) {
        SplitRng rng(spec.seed, c);
        for (std::size_t r = 0; r < n; ++r) {
          values[r * 4 + c] = rng.normal();
        }
      }
      return Dataset(std::move(values), {"xt", "yt", "zt", "wt"});
    }
    case SynthKind::Spiral: {
      // (x, y) = (t cos t, t sin t) + noise, z = t, t uniform on [0, 4*pi]
      double noise = 0.1;
      if (spec.params.size() > 1) throw Error("spiral takes one noise amplitude");
      if (!spec.params.empty()) noise = spec.params[0];
      if (noise < 0.0) throw Error("noise amplitude must be non-negative");
      SplitRng t_rng(spec.seed, 0);
      SplitRng nx(spec.seed, 1);
      SplitRng ny(spec.seed, 2);
      std::vector<double> values(n * 3);
      for (std::size_t r = 0; r < n; ++r) {
        const double t = t_rng.uniform(0.0, 4.0 * std::numbers::pi);
        values[r * 3 + 0] = t * std::cos(t) + noise * nx.normal();
        values[r * 3 + 1] = t * std::sin(t) + noise * ny.normal();
        values[r * 3 + 2] = t;
      }
      return Dataset(std::move(values), {"x", "y", "z"});
    }
    case SynthKind::Sine: {
      // y = sin(x) + noise, x uniform on [0, 2*pi]; noise = 0 is allowed
      double noise = 0.1;
      if (spec.params.size() > 1) throw Error("sine takes one noise amplitude");
      if (!spec.params.empty()) noise = spec.params[0];
      if (noise < 0.0) throw Error("noise amplitude must be non-negative");
      SplitRng x_rng(spec.seed, 0);
      SplitRng n_rng(spec.seed, 1);
      std::vector<double> values(n * 2);
      for (std::size_t r = 0; r < n; ++r) {
        const double x = x_rng.uniform(0.0, 2.0 * std::numbers::pi);
        values[r * 2 + 0] = x;
        values[r * 2 + 1] = std::sin(x) + noise * n_rng.normal();
      }
      return Dataset(std::move(values), {"x", "y"});
    }
  }
  throw Error("unknown synthetic kind");
}

}  // namespace ii
