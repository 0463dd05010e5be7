// Copyright 2026 The vruref Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vruref/cli.hpp"

#include "vruref/io.hpp"
#include "vruref/pipeline.hpp"
#include "vruref/signature.hpp"

#include <fmt/format.h>
#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace vruref
{

namespace
{

namespace fs = std::filesystem;

/// Failure of the environment rather than of the user's input.
class RuntimeFailure : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

std::ifstream open_in(const fs::path & path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) {
    throw RuntimeFailure(fmt::format("cannot open '{}' for reading", path.string()));
  }
  return is;
}

std::string slurp(const fs::path & path)
{
  auto is = open_in(path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// Serialises to memory first so a failed run leaves no partial file behind.
template <typename Writer>
void write_file(const fs::path & path, Writer writer)
{
  std::ostringstream ss;
  writer(ss);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) {
    throw RuntimeFailure(fmt::format("cannot open '{}' for writing", path.string()));
  }
  os << ss.str();
  os.flush();
  if (!os) {
    throw RuntimeFailure(fmt::format("failed writing '{}'", path.string()));
  }
}

void ensure_directory(const fs::path & dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw RuntimeFailure(fmt::format("cannot create directory '{}'", dir.string()));
  }
}

void ensure_parent(const fs::path & file)
{
  if (file.has_parent_path()) {
    ensure_directory(file.parent_path());
  }
}

std::string num(double v)
{
  return fmt::format("{:.9g}", v == 0.0 ? 0.0 : v);
}

std::string opt_num(const std::optional<double> & v)
{
  return v ? num(*v) : std::string{};
}

template <typename Reader>
auto read_file(const fs::path & path, Reader reader)
{
  auto is = open_in(path);
  return reader(is);
}

io::Manifest read_manifest(const fs::path & dir)
{
  return io::parse_manifest(slurp(dir / "scenario.json"));
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions
{
  std::string config;
  std::optional<int> preset;
  std::optional<std::uint64_t> seed;
  std::string out;
};

int cmd_simulate(const SimulateOptions & o, std::ostream & out)
{
  sim::ScenarioConfig cfg;
  if (!o.config.empty()) {
    cfg = io::parse_scenario_config(slurp(o.config));
  } else if (o.preset) {
    cfg = sim::preset(*o.preset);
  } else {
    throw UsageError("simulate needs --config or --preset");
  }
  if (o.seed) {
    cfg.seed = *o.seed;
  }
  const sim::Scenario s = sim::simulate(cfg);

  const fs::path dir(o.out);
  ensure_directory(dir);
  write_file(dir / "gnss.csv", [&](std::ostream & os) { io::write_gnss(os, s.gnss); });
  write_file(dir / "imu.csv", [&](std::ostream & os) { io::write_imu(os, s.imu); });
  write_file(dir / "radar.jsonl", [&](std::ostream & os) { io::write_radar(os, s.scans); });
  write_file(
    dir / "truth_labels.jsonl", [&](std::ostream & os) { io::write_truth_labels(os, s.labels); });
  write_file(dir / "truth_traj.csv", [&](std::ostream & os) { io::write_states(os, s.truth); });

  io::Manifest m;
  m.config = cfg;
  m.gnss_count = s.gnss.size();
  m.imu_count = s.imu.size();
  m.scan_count = s.scans.size();
  m.label_count = s.labels.size();
  m.truth_count = s.truth.size();
  const std::string manifest = io::manifest_json(m);
  write_file(dir / "scenario.json", [&](std::ostream & os) { os << manifest; });
  out << manifest;
  return kExitOk;
}

// ---------------------------------------------------------------- annotate

struct AnnotateOptions
{
  std::string input;
  std::string mode{"gnss_imu"};
  std::string kind;
  double shape_scale{1.0};
  int track_id{1};
  std::string out;
};

int cmd_annotate(const AnnotateOptions & o, std::ostream & out)
{
  const ReferenceMode mode = parse_reference_mode(o.mode);
  const fs::path dir(o.input);
  const io::Manifest manifest = read_manifest(dir);
  const auto gnss = read_file(dir / "gnss.csv", io::read_gnss);
  const auto imu = read_file(dir / "imu.csv", io::read_imu);
  const auto scans = read_file(dir / "radar.jsonl", io::read_radar);
  const VruKind kind = o.kind.empty() ? manifest.config.vru_kind : parse_vru_kind(o.kind);

  AnnotationParams params;
  params.track_id = o.track_id;
  params.shape_scale = o.shape_scale;
  const AnnotationResult result = annotate_recording(
    gnss, imu, scans, kind, manifest.config.mounts, manifest.config.ego_pose, mode, params);

  const fs::path path(o.out);
  ensure_parent(path);
  write_file(path, [&](std::ostream & os) { io::write_labeled(os, result.scans); });

  std::size_t assigned = 0;
  for (const auto & s : result.scans) {
    assigned += s.assigned.size();
  }
  out << fmt::format(
    "mode={} kind={} scans={} skipped={} assigned={}\n", to_string(mode), to_string(kind),
    result.scans.size(), result.skipped, assigned);
  return kExitOk;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateOptions
{
  std::string labeled;
  std::string truth;
  std::string baseline;
  std::string out;
};

struct StatColumn
{
  std::string_view name;
  double CycleStats::*field;
  double bin_width;
  double lower;
  double upper;
};

const StatColumn kStatColumns[] = {
  {"mean_range", &CycleStats::mean_range, 1.0, 0.0, 60.0},
  {"mean_comp_power", &CycleStats::mean_comp_power, 2.0, -20.0, 80.0},
  {"doppler_std", &CycleStats::doppler_std, 0.05, 0.0, 3.0},
  {"weighted_count", &CycleStats::weighted_count, 1.0, 0.0, 100.0},
};

std::vector<double> column(const std::vector<CycleStats> & stats, const StatColumn & c)
{
  std::vector<double> v;
  v.reserve(stats.size());
  for (const auto & s : stats) {
    v.push_back(s.*c.field);
  }
  return v;
}

std::vector<double> count_column(const std::vector<CycleStats> & stats)
{
  std::vector<double> v;
  v.reserve(stats.size());
  for (const auto & s : stats) {
    v.push_back(static_cast<double>(s.count));
  }
  return v;
}

void write_histogram_rows(std::ostream & os, std::string_view name, const Histogram & h)
{
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    os << fmt::format(
      "{},{},{},{}\n", name, num(h.bin_lower(i)), num(h.bin_lower(i + 1)), h.counts[i]);
  }
  os << fmt::format("{},below,,{}\n{},above,,{}\n", name, h.below, name, h.above);
}

int cmd_evaluate(const EvaluateOptions & o, std::ostream & out)
{
  const auto scans = read_file(o.labeled, io::read_labeled);
  const auto labels = read_file(o.truth, io::read_truth_labels);
  const TruthIndex truth = sim::truth_index(labels);

  const AssignmentScore micro = score_assignment(scans, truth, Averaging::Micro);
  const AssignmentScore macro = score_assignment(scans, truth, Averaging::Macro);
  const auto stats = cycle_stats_series(scans);

  const fs::path dir(o.out);
  ensure_directory(dir);
  write_file(dir / "scores.csv", [&](std::ostream & os) {
    os << io::csv_header_line() << "\naveraging,precision,recall,tp,fp,fn,scans\n";
    for (const auto & [name, s] : {std::pair{"micro", micro}, std::pair{"macro", macro}}) {
      os << fmt::format(
        "{},{},{},{},{},{},{}\n", name, num(s.precision), num(s.recall), s.tp, s.fp, s.fn,
        s.scans);
    }
  });
  write_file(dir / "cycle_stats.csv", [&](std::ostream & os) {
    os << io::csv_header_line()
       << "\nt,count,mean_range,mean_comp_power,doppler_std,conf_major,conf_minor,"
          "weighted_count\n";
    for (const auto & c : stats) {
      os << fmt::format(
        "{:.6f},{},{},{},{},{},{},{}\n", c.timestamp, c.count, num(c.mean_range),
        num(c.mean_comp_power), num(c.doppler_std), opt_num(c.conf_major), opt_num(c.conf_minor),
        num(c.weighted_count));
    }
  });
  write_file(dir / "histograms.csv", [&](std::ostream & os) {
    os << io::csv_header_line() << "\nquantity,bin_lower,bin_upper,count\n";
    write_histogram_rows(os, "count", histogram(count_column(stats), 1.0, 0.0, 60.0));
    for (const auto & c : kStatColumns) {
      write_histogram_rows(os, c.name, histogram(column(stats, c), c.bin_width, c.lower, c.upper));
    }
  });

  std::vector<CycleStats> baseline;
  if (!o.baseline.empty()) {
    baseline = cycle_stats_series(read_file(o.baseline, io::read_labeled));
  }
  write_file(dir / "ttest.csv", [&](std::ostream & os) {
    os << io::csv_header_line() << "\nquantity,mean_a,mean_b,t,dof,p_two_sided,status\n";
    if (o.baseline.empty()) {
      return;
    }
    auto row = [&](std::string_view name, const std::vector<double> & a,
                   const std::vector<double> & b) {
      try {
        const TTestResult r = welch_t_test(a, b);
        os << fmt::format(
          "{},{},{},{},{},{},ok\n", name, num(mean(a)), num(mean(b)), num(r.t), num(r.dof),
          num(r.p_two_sided));
      } catch (const UsageError &) {
        os << fmt::format("{},,,,,,degenerate\n", name);
      }
    };
    row("count", count_column(stats), count_column(baseline));
    for (const auto & c : kStatColumns) {
      row(c.name, column(stats, c), column(baseline, c));
    }
  });

  out << fmt::format(
    "micro precision={} recall={}\nmacro precision={} recall={}\ncycles={}\n", num(micro.precision),
    num(micro.recall), num(macro.precision), num(macro.recall), stats.size());
  return kExitOk;
}

// ---------------------------------------------------------------- signature

struct SignatureOptions
{
  std::string labeled;
  std::string truth_traj;
  std::string out;
  SignatureParams grid;
};

int cmd_signature(const SignatureOptions & o, std::ostream & out)
{
  const auto scans = read_file(o.labeled, io::read_labeled);
  StateProvider reference;
  std::optional<Trajectory> truth;
  if (!o.truth_traj.empty()) {
    const auto states = read_file(o.truth_traj, io::read_states);
    truth.emplace(build_state_trajectory(states));
    reference = [&truth](const LabeledScan & s) { return truth->state_at(s.timestamp); };
  }
  const SignatureGrid grid = accumulate(scans, o.grid, reference);

  const fs::path prefix(o.out);
  ensure_parent(prefix);
  write_file(prefix.string() + ".pgm", [&](std::ostream & os) { write_pgm(os, grid); });
  write_file(prefix.string() + ".csv", [&](std::ostream & os) { write_csv(os, grid); });

  out << fmt::format("total={} overflow={}", grid.total(), grid.overflow());
  if (grid.total() > 0) {
    const GridStats st = grid_stats(grid);
    out << fmt::format(
      " peak=({},{}) major_sigma={} minor_sigma={} major_direction_deg={}", num(st.peak_center.x()),
      num(st.peak_center.y()), num(st.major_sigma), num(st.minor_sigma),
      num(st.major_direction * 180.0 / kPi));
  }
  out << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------- track

struct TrackOptions
{
  std::string input;
  std::string labeled;
  bool truth_assigned{false};
  bool use_doppler{false};
  std::string out;
};

int cmd_track(const TrackOptions & o, std::ostream & out)
{
  if (o.labeled.empty() == !o.truth_assigned) {
    throw UsageError("track needs exactly one of --labeled or --truth-assigned");
  }
  const fs::path dir(o.input);
  const io::Manifest manifest = read_manifest(dir);
  const auto & cfg = manifest.config;

  std::vector<eot::ScanMeasurement> measurements;
  if (o.truth_assigned) {
    const auto scans = read_file(dir / "radar.jsonl", io::read_radar);
    const auto labels = read_file(dir / "truth_labels.jsonl", io::read_truth_labels);
    measurements = measurements_from_truth(scans, sim::truth_index(labels), cfg.mounts, cfg.ego_pose);
  } else {
    const auto scans = read_file(o.labeled, io::read_labeled);
    measurements = measurements_from_labeled(scans, cfg.mounts, cfg.ego_pose);
  }

  eot::TrackerParams params;
  params.use_doppler = o.use_doppler;
  const auto estimates = eot::run_tracker(measurements, params);

  const auto states = read_file(dir / "truth_traj.csv", io::read_states);
  const Trajectory truth = build_state_trajectory(states);
  std::vector<eot::TrackEstimate> covered;
  std::copy_if(estimates.begin(), estimates.end(), std::back_inserter(covered), [&](const auto & e) {
    return truth.covers(e.timestamp);
  });
  const auto errors =
    eot::tracking_metrics(covered, truth_samples(covered, truth, sim::true_extent(cfg)));

  const fs::path prefix(o.out);
  ensure_parent(prefix);
  write_file(prefix.string() + "_track.csv", [&](std::ostream & os) {
    os << io::csv_header_line() << "\nt,x,y,speed,heading,yaw_rate,length,width,orientation\n";
    for (const auto & e : estimates) {
      os << fmt::format(
        "{:.6f},{:.6f},{:.6f},{},{},{},{},{},{}\n", e.timestamp, e.x, e.y, num(e.speed),
        num(e.heading), num(e.yaw_rate), num(e.extent.length), num(e.extent.width),
        num(e.extent.orientation));
    }
  });
  write_file(prefix.string() + "_errors.csv", [&](std::ostream & os) {
    os << io::csv_header_line()
       << "\nt,centroid_error,centroid_rmse,length_rmse,width_rmse,yaw_rate_abs_error,"
          "orientation_abs_error_deg\n";
    for (const auto & e : errors) {
      os << fmt::format(
        "{:.6f},{},{},{},{},{},{}\n", e.timestamp, num(e.centroid_error), num(e.centroid_rmse),
        num(e.length_rmse), num(e.width_rmse), num(e.yaw_rate_abs_error),
        num(e.orientation_abs_error_deg));
    }
  });

  out << fmt::format(
    "doppler={} scans={} estimates={}", o.use_doppler ? "on" : "off", measurements.size(),
    estimates.size());
  if (!errors.empty()) {
    const auto & last = errors.back();
    out << fmt::format(
      " centroid_rmse={} length_rmse={} width_rmse={}", num(last.centroid_rmse),
      num(last.length_rmse), num(last.width_rmse));
  }
  out << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  CLI::App app{"Radar VRU reference annotation toolkit"};
  app.name("vruref");
  app.require_subcommand(1);

  SimulateOptions sim_opts;
  auto * simulate = app.add_subcommand("simulate", "Generate a seeded scenario");
  auto * config_opt = simulate->add_option("--config", sim_opts.config, "Scenario config JSON");
  auto * preset_opt = simulate->add_option("--preset", sim_opts.preset, "Preset id (1, 2 or 3)");
  config_opt->excludes(preset_opt);
  simulate->add_option("--seed", sim_opts.seed, "Override the seed");
  simulate->add_option("--out", sim_opts.out, "Output directory")->required();

  AnnotateOptions ann_opts;
  auto * annotate = app.add_subcommand("annotate", "Assign radar detections to the VRU track");
  annotate->add_option("--input", ann_opts.input, "Scenario directory")->required();
  annotate->add_option("--mode", ann_opts.mode, "gnss_only or gnss_imu")->capture_default_str();
  annotate->add_option("--kind", ann_opts.kind, "pedestrian or cyclist (default: from scenario)");
  annotate->add_option("--shape-scale", ann_opts.shape_scale, "Selection shape scale")
    ->capture_default_str();
  annotate->add_option("--track-id", ann_opts.track_id, "Track id")->capture_default_str();
  annotate->add_option("--out", ann_opts.out, "Output labeled.jsonl")->required();

  EvaluateOptions eval_opts;
  auto * evaluate = app.add_subcommand("evaluate", "Score labeled scans and export statistics");
  evaluate->add_option("--labeled", eval_opts.labeled, "labeled.jsonl")->required();
  evaluate->add_option("--truth", eval_opts.truth, "truth_labels.jsonl")->required();
  evaluate->add_option("--baseline", eval_opts.baseline, "Second labeled.jsonl for t-tests");
  evaluate->add_option("--out", eval_opts.out, "Output directory")->required();

  SignatureOptions sig_opts;
  auto * signature = app.add_subcommand("signature", "Accumulate an object signature grid");
  signature->add_option("--labeled", sig_opts.labeled, "labeled.jsonl")->required();
  signature->add_option("--truth-traj", sig_opts.truth_traj, "Reference to truth_traj.csv");
  signature->add_option("--resolution", sig_opts.grid.resolution, "Cell size in m")
    ->capture_default_str();
  signature->add_option("--half-x", sig_opts.grid.half_extent_x, "Half extent along x in m")
    ->capture_default_str();
  signature->add_option("--half-y", sig_opts.grid.half_extent_y, "Half extent along y in m")
    ->capture_default_str();
  signature->add_option("--out", sig_opts.out, "Output prefix")->required();

  TrackOptions track_opts;
  auto * track = app.add_subcommand("track", "Run the extended-object tracker");
  track->add_option("--input", track_opts.input, "Scenario directory")->required();
  track->add_option("--labeled", track_opts.labeled, "labeled.jsonl");
  track->add_flag("--truth-assigned", track_opts.truth_assigned, "Use simulator truth assignment");
  track->add_flag("--use-doppler", track_opts.use_doppler, "Enable the Doppler update");
  track->add_option("--out", track_opts.out, "Output prefix")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError & e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) {
      return cmd_simulate(sim_opts, out);
    }
    if (annotate->parsed()) {
      return cmd_annotate(ann_opts, out);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(eval_opts, out);
    }
    if (signature->parsed()) {
      return cmd_signature(sig_opts, out);
    }
    return cmd_track(track_opts, out);
  } catch (const UsageError & e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception & e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace vruref
