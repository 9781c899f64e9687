// ii: information-imbalance toolkit for comparing distance measures,
// selecting feature subsets, optimizing relative scales, and scanning
// time-lagged information asymmetry.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ii/dataset.hpp"
#include "ii/error.hpp"
#include "ii/imbalance.hpp"
#include "ii/lag.hpp"
#include "ii/metric.hpp"
#include "ii/parallel.hpp"
#include "ii/select.hpp"
#include "ii/svg.hpp"

using json = nlohmann::ordered_json;

namespace {

struct LoadOpts {
  std::string path;
  std::string group_col;
  std::string time_col;
  std::vector<std::string> ratios;       // "num/den=new"
  std::string standardize_cols;          // comma list, range sugar allowed
};

void add_load_flags(CLI::App* cmd, LoadOpts& opts) {
  cmd->add_option("--data", opts.path, "input CSV (header row required)")
      ->required();
  cmd->add_option("--group-col", opts.group_col, "group column name");
  cmd->add_option("--time-col", opts.time_col, "integer time column name");
  cmd->add_option("--ratio", opts.ratios,
                  "derive a ratio column, format num/den=new (repeatable)");
  cmd->add_option("--standardize", opts.standardize_cols,
                  "columns to standardize to zero mean, unit std");
}

// Column list mini-grammar: comma-separated names with `a:z` header-order
// ranges (inclusive). No regular expressions.
std::vector<std::string> expand_columns(const ii::Dataset& ds,
                                        const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    const auto colon = token.find(':');
    if (colon == std::string::npos) {
      ds.column_index(token);
      out.push_back(token);
      continue;
    }
    const std::size_t lo = ds.column_index(token.substr(0, colon));
    const std::size_t hi = ds.column_index(token.substr(colon + 1));
    if (hi < lo) throw ii::Error("descending column range: " + token);
    for (std::size_t c = lo; c <= hi; ++c) out.push_back(ds.column_names()[c]);
  }
  if (out.empty()) throw ii::Error("empty column list: '" + text + "'");
  return out;
}

ii::Dataset load_dataset(const LoadOpts& opts) {
  std::optional<std::string> group, time;
  if (!opts.group_col.empty()) group = opts.group_col;
  if (!opts.time_col.empty()) time = opts.time_col;
  ii::Dataset ds = ii::load_csv(opts.path, group, time);
  for (const auto& r : opts.ratios) {
    const auto slash = r.find('/');
    const auto eq = r.find('=', slash == std::string::npos ? 0 : slash);
    if (slash == std::string::npos || eq == std::string::npos) {
      throw ii::Error("bad --ratio, expected num/den=new: " + r);
    }
    ds = ii::derive_ratio(ds, r.substr(0, slash),
                          r.substr(slash + 1, eq - slash - 1),
                          r.substr(eq + 1));
  }
  if (!opts.standardize_cols.empty()) {
    ds = ii::standardize(ds, expand_columns(ds, opts.standardize_cols));
  }
  return ds;
}

std::vector<double> parse_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    out.push_back(std::stod(token));
  }
  return out;
}

// Lag grammar: comma list of integers, with `a:b` inclusive ranges.
std::vector<int> parse_lags(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (token.empty()) continue;
    const auto colon = token.find(':', token[0] == '-' ? 1 : 0);
    if (colon == std::string::npos) {
      out.push_back(std::stoi(token));
      continue;
    }
    const int lo = std::stoi(token.substr(0, colon));
    const int hi = std::stoi(token.substr(colon + 1));
    if (hi < lo) throw ii::Error("descending lag range: " + token);
    for (int l = lo; l <= hi; ++l) out.push_back(l);
  }
  if (out.empty()) throw ii::Error("empty lag list");
  return out;
}

ii::DistanceSpec make_spec(const ii::Dataset& ds, const std::string& cols,
                           const std::string& scales) {
  auto spec = ii::DistanceSpec::from_columns(ds, expand_columns(ds, cols));
  if (!scales.empty()) {
    spec.scales = parse_doubles(scales);
    spec.validate(ds);
  }
  return spec;
}

class RecordSink {
 public:
  explicit RecordSink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw ii::Error("cannot write output file: " + path);
    }
  }
  void write(const json& record) {
    (file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout)
        << record.dump() << "\n";
  }

 private:
  std::ofstream file_;
};

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ii::Error("cannot write file: " + path);
  out << content;
}

json pair_record(const ii::PlanePoint& pp, const ii::RelationshipClass& rc,
                 const std::string& space_a, const std::string& space_b) {
  json rec;
  rec["space_a"] = space_a;
  rec["space_b"] = space_b;
  rec["delta_ab"] = pp.delta_ab;
  rec["delta_ba"] = pp.delta_ba;
  rec["n"] = pp.est_ab.n;
  rec["k"] = pp.est_ab.k;
  rec["k_extension"] = pp.est_ab.k != 1;
  rec["mean_rank_ab"] = pp.est_ab.mean_rank;
  rec["mean_rank_ba"] = pp.est_ba.mean_rank;
  rec["stderr_ab"] = pp.est_ab.stderr_;
  rec["stderr_ba"] = pp.est_ba.stderr_;
  rec["class"] = ii::to_string(rc.value);
  rec["tau_low"] = rc.tau_low;
  rec["gap"] = rc.gap;
  return rec;
}

json step_record(const std::string& strategy, const ii::TraceStep& step) {
  json rec;
  rec["strategy"] = strategy;
  rec["d"] = step.d;
  rec["subset"] = step.subset;
  rec["objective"] = step.objective;
  rec["delta_ab"] = step.delta_ab;
  rec["delta_ba"] = step.delta_ba;
  rec["evaluations"] = step.evaluations;
  rec["wall_seconds"] = step.wall_seconds;
  return rec;
}

int run(int argc, char** argv) {
  CLI::App app{
      "ii: rank-based comparison of distance measures.\n"
      "The II_THREADS environment variable caps worker threads when "
      "--threads is not given."};
  app.require_subcommand(1);

  unsigned threads = 0;
  app.add_option("--threads", threads, "worker thread cap (0 = hardware)");

  // synth
  auto* synth = app.add_subcommand("synth", "write a synthetic CSV fixture");
  std::string synth_kind = "gauss-aniso-3d", synth_params, synth_out;
  std::size_t synth_n = 1000;
  std::uint64_t synth_seed = 0;
  synth->add_option("--kind", synth_kind,
                    "gauss-aniso-3d | gauss-iso-4d | spiral | sine");
  synth->add_option("--n", synth_n, "number of rows")->required();
  synth->add_option("--params", synth_params,
                    "comma list: sigmas (gauss) or noise amplitude");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--out", synth_out, "output CSV path")->required();

  // imbalance
  auto* imb = app.add_subcommand("imbalance",
                                 "information imbalance between two spaces");
  LoadOpts imb_load;
  add_load_flags(imb, imb_load);
  std::string imb_a, imb_b, imb_scales_a, imb_scales_b, imb_out;
  int imb_k = 1;
  std::size_t imb_subsample = 0;
  std::uint64_t imb_seed = 0;
  double imb_tau = 0.25, imb_gap = 0.25;
  imb->add_option("--space-a", imb_a, "columns of space A")->required();
  imb->add_option("--space-b", imb_b, "columns of space B")->required();
  imb->add_option("--scales-a", imb_scales_a, "per-feature scales for A");
  imb->add_option("--scales-b", imb_scales_b, "per-feature scales for B");
  imb->add_option("--k", imb_k, "conditioning depth (1 = definition)");
  imb->add_option("--subsample", imb_subsample,
                  "conditioning-point subsample size (0 = all)");
  imb->add_option("--seed", imb_seed, "subsampling seed");
  imb->add_option("--tau-low", imb_tau, "classification threshold");
  imb->add_option("--gap", imb_gap, "containment gap threshold");
  imb->add_option("--out", imb_out, "output JSONL path (default stdout)");

  // plane
  auto* plane = app.add_subcommand("plane", "imbalance plane for space pairs");
  LoadOpts plane_load;
  add_load_flags(plane, plane_load);
  std::string plane_pairs, plane_out, plane_svg;
  int plane_k = 1;
  double plane_tau = 0.25, plane_gap = 0.25;
  plane->add_option("--pairs", plane_pairs,
                    "pairs as 'colsA|colsB;colsC|colsD;...'")->required();
  plane->add_option("--k", plane_k, "conditioning depth");
  plane->add_option("--tau-low", plane_tau, "classification threshold");
  plane->add_option("--gap", plane_gap, "containment gap threshold");
  plane->add_option("--svg", plane_svg, "write an SVG plane plot here");
  plane->add_option("--out", plane_out, "output JSONL path (default stdout)");

  // hist
  auto* hist = app.add_subcommand("hist", "conditional rank histogram");
  LoadOpts hist_load;
  add_load_flags(hist, hist_load);
  std::string hist_a, hist_b, hist_out;
  int hist_k = 1;
  std::size_t hist_bins = 20;
  hist->add_option("--space-a", hist_a, "columns of space A")->required();
  hist->add_option("--space-b", hist_b, "columns of space B")->required();
  hist->add_option("--k", hist_k, "conditioning depth");
  hist->add_option("--bins", hist_bins, "number of bins");
  hist->add_option("--out", hist_out, "output JSONL path (default stdout)");

  // select
  auto* sel = app.add_subcommand("select", "feature-subset search");
  LoadOpts sel_load;
  add_load_flags(sel, sel_load);
  std::string sel_pool, sel_target, sel_mode = "forward",
              sel_strategy = "greedy", sel_out, sel_svg;
  std::size_t sel_dmax = 1, sel_trials = 20;
  std::uint64_t sel_budget = 1000000, sel_seed = 0;
  int sel_k = 1;
  sel->add_option("--pool", sel_pool, "candidate columns")->required();
  sel->add_option("--target", sel_target, "target space columns")->required();
  sel->add_option("--mode", sel_mode, "forward | symmetric");
  sel->add_option("--strategy", sel_strategy,
                  "exhaustive | greedy | random | native");
  sel->add_option("--d-max", sel_dmax, "largest subset size")->required();
  sel->add_option("--trials", sel_trials, "trials per d (random strategy)");
  sel->add_option("--budget", sel_budget, "exhaustive evaluation budget");
  sel->add_option("--seed", sel_seed, "random-strategy seed");
  sel->add_option("--k", sel_k, "conditioning depth");
  sel->add_option("--svg", sel_svg, "write per-d plane points as SVG");
  sel->add_option("--out", sel_out, "output JSONL path (default stdout)");

  // scale
  auto* scl = app.add_subcommand("scale", "relative-scale grid search");
  LoadOpts scl_load;
  add_load_flags(scl, scl_load);
  std::string scl_features, scl_anchor, scl_target, scl_mode = "forward",
              scl_out;
  double scl_lo = 1e-3, scl_hi = 1e3;
  std::size_t scl_points = 61, scl_passes = 1;
  int scl_k = 1;
  scl->add_option("--features", scl_features, "columns with unknown scale")
      ->required();
  scl->add_option("--anchor", scl_anchor, "anchor column (scale fixed to 1)")
      ->required();
  scl->add_option("--target", scl_target, "target space columns")->required();
  scl->add_option("--mode", scl_mode, "forward | symmetric");
  scl->add_option("--grid-lo", scl_lo, "grid lower bound");
  scl->add_option("--grid-hi", scl_hi, "grid upper bound");
  scl->add_option("--grid-points", scl_points, "log-spaced grid size");
  scl->add_option("--passes", scl_passes, "coordinate-descent passes");
  scl->add_option("--k", scl_k, "conditioning depth");
  scl->add_option("--out", scl_out, "output JSONL path (default stdout)");

  // lag
  auto* lag = app.add_subcommand("lag", "time-lag imbalance scan");
  LoadOpts lag_load;
  add_load_flags(lag, lag_load);
  std::string lag_source, lag_target, lag_lags, lag_out, lag_svg;
  int lag_k = 1;
  lag->add_option("--source", lag_source, "source space columns")->required();
  lag->add_option("--target", lag_target, "target space columns")->required();
  lag->add_option("--lags", lag_lags, "lags, e.g. '-3:3' or '1,2,5'")
      ->required();
  lag->add_option("--k", lag_k, "conditioning depth");
  lag->add_option("--svg", lag_svg, "write per-lag plane points as SVG");
  lag->add_option("--out", lag_out, "output JSONL path (default stdout)");

  // accept app-level flags (--threads) after the subcommand name too
  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  ii::set_thread_cap(threads);

  if (*synth) {
    ii::SynthSpec spec;
    spec.kind = ii::synth_kind_from_string(synth_kind);
    spec.n = synth_n;
    spec.seed = synth_seed;
    if (!synth_params.empty()) spec.params = parse_doubles(synth_params);
    const ii::Dataset ds = ii::synthesize(spec);
    ii::save_csv(ds, synth_out);
    std::cout << "wrote " << ds.rows() << " rows x " << ds.cols()
              << " cols to " << synth_out << "\n";
    return 0;
  }

  if (*imb) {
    const ii::Dataset ds = load_dataset(imb_load);
    const auto spec_a = make_spec(ds, imb_a, imb_scales_a);
    const auto spec_b = make_spec(ds, imb_b, imb_scales_b);
    ii::ImbalanceOptions opts;
    opts.k = imb_k;
    opts.max_conditioning_points = imb_subsample;
    opts.seed = imb_seed;
    const auto pp = ii::plane_point(ds, spec_a, spec_b, opts);
    const auto rc = ii::classify(pp, imb_tau, imb_gap);
    RecordSink sink(imb_out);
    sink.write(pair_record(pp, rc, imb_a, imb_b));
    std::cerr << "delta(A->B) = " << pp.delta_ab << ", delta(B->A) = "
              << pp.delta_ba << ", class = " << ii::to_string(rc.value)
              << "\n";
    return 0;
  }

  if (*plane) {
    const ii::Dataset ds = load_dataset(plane_load);
    ii::ImbalanceOptions opts;
    opts.k = plane_k;
    RecordSink sink(plane_out);
    std::vector<ii::SvgPoint> svg_points;

    std::stringstream pairs(plane_pairs);
    std::string item;
    while (std::getline(pairs, item, ';')) {
      if (item.empty()) continue;
      const auto bar = item.find('|');
      if (bar == std::string::npos) {
        throw ii::Error("bad --pairs entry, expected colsA|colsB: " + item);
      }
      const std::string a = item.substr(0, bar), b = item.substr(bar + 1);
      const auto pp = ii::plane_point(ds, make_spec(ds, a, ""),
                                      make_spec(ds, b, ""), opts,
                                      a + " vs " + b);
      const auto rc = ii::classify(pp, plane_tau, plane_gap);
      sink.write(pair_record(pp, rc, a, b));
      svg_points.push_back({pp.delta_ab, pp.delta_ba, a + "|" + b});
    }
    if (svg_points.empty()) throw ii::Error("no pairs given");
    if (!plane_svg.empty()) write_text(plane_svg, ii::emit_svg(svg_points));
    return 0;
  }

  if (*hist) {
    const ii::Dataset ds = load_dataset(hist_load);
    const auto h = ii::conditional_histogram(ds, make_spec(ds, hist_a, ""),
                                             make_spec(ds, hist_b, ""), hist_k,
                                             hist_bins);
    json rec;
    rec["space_a"] = hist_a;
    rec["space_b"] = hist_b;
    rec["k"] = hist_k;
    rec["k_extension"] = hist_k != 1;
    rec["total"] = h.total;
    rec["edges"] = h.edges;
    rec["counts"] = h.counts;
    rec["frequencies"] = h.frequencies;
    RecordSink sink(hist_out);
    sink.write(rec);
    return 0;
  }

  if (*sel) {
    const ii::Dataset ds = load_dataset(sel_load);
    ii::SelectionObjective obj;
    obj.target = make_spec(ds, sel_target, "");
    obj.k = sel_k;
    if (sel_mode == "forward") {
      obj.mode = ii::ObjectiveMode::Forward;
    } else if (sel_mode == "symmetric") {
      obj.mode = ii::ObjectiveMode::Symmetric;
    } else {
      throw ii::Error("unknown mode: " + sel_mode);
    }
    const auto pool = expand_columns(ds, sel_pool);
    RecordSink sink(sel_out);
    std::vector<ii::SvgPoint> svg_points;

    if (sel_strategy == "random") {
      for (std::size_t d = 1; d <= sel_dmax; ++d) {
        const auto rb =
            ii::random_baseline(ds, pool, obj, d, sel_trials, sel_seed);
        json rec;
        rec["strategy"] = "random";
        rec["d"] = d;
        rec["trials"] = sel_trials;
        rec["min"] = rb.min;
        rec["median"] = rb.median;
        sink.write(rec);
      }
      return 0;
    }

    ii::SelectionTrace trace;
    if (sel_strategy == "exhaustive") {
      trace = ii::exhaustive_best_subsets(ds, pool, obj, sel_dmax, sel_budget);
    } else if (sel_strategy == "greedy") {
      trace = ii::greedy_forward(ds, pool, obj, sel_dmax);
    } else if (sel_strategy == "native") {
      trace = ii::native_order(ds, pool, obj, sel_dmax);
    } else {
      throw ii::Error("unknown strategy: " + sel_strategy);
    }
    for (const auto& step : trace.steps) {
      json rec = step_record(trace.strategy, step);
      rec["pool_target_overlap"] = trace.pool_target_overlap;
      sink.write(rec);
      svg_points.push_back(
          {step.delta_ab, step.delta_ba, "d=" + std::to_string(step.d)});
    }
    if (!sel_svg.empty()) write_text(sel_svg, ii::emit_svg(svg_points));
    return 0;
  }

  if (*scl) {
    const ii::Dataset ds = load_dataset(scl_load);
    ii::SelectionObjective obj;
    obj.target = make_spec(ds, scl_target, "");
    obj.k = scl_k;
    obj.mode = scl_mode == "symmetric" ? ii::ObjectiveMode::Symmetric
                                       : ii::ObjectiveMode::Forward;
    const auto result =
        ii::scale_optimize(ds, expand_columns(ds, scl_features), scl_anchor,
                           obj, ii::log_grid(scl_lo, scl_hi, scl_points),
                           scl_passes);
    RecordSink sink(scl_out);
    for (const auto& sweep : result.sweeps) {
      json rec;
      rec["feature"] = sweep.feature;
      rec["best_scale"] = sweep.best_scale;
      rec["grid"] = sweep.grid;
      rec["objective"] = sweep.objective;
      sink.write(rec);
    }
    json rec;
    rec["features"] = result.features;
    rec["scales"] = result.scales;
    rec["objective"] = result.objective;
    sink.write(rec);
    return 0;
  }

  if (*lag) {
    const ii::Dataset ds = load_dataset(lag_load);
    ii::LagSpec spec;
    spec.source_cols = expand_columns(ds, lag_source);
    spec.target_cols = expand_columns(ds, lag_target);
    spec.lags = parse_lags(lag_lags);
    ii::ImbalanceOptions opts;
    opts.k = lag_k;
    const auto scan = ii::lag_scan(ds, spec, opts);
    RecordSink sink(lag_out);
    std::vector<ii::SvgPoint> svg_points;
    for (const auto& pt : scan.points) {
      json rec;
      rec["lag"] = pt.lag;
      rec["ok"] = pt.ok;
      rec["pairs"] = pt.pairs;
      if (pt.ok) {
        rec["delta_fwd"] = pt.forward.delta;
        rec["delta_rev"] = pt.backward.delta;
        rec["stderr_fwd"] = pt.forward.stderr_;
        rec["stderr_rev"] = pt.backward.stderr_;
        svg_points.push_back({pt.forward.delta, pt.backward.delta,
                              "dt=" + std::to_string(pt.lag)});
      }
      sink.write(rec);
    }
    json rec;
    rec["has_argmin"] = scan.has_argmin;
    if (scan.has_argmin) rec["argmin_lag"] = scan.argmin_lag;
    sink.write(rec);
    if (!lag_svg.empty() && !svg_points.empty()) {
      write_text(lag_svg, ii::emit_svg(svg_points));
    }
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ii::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
