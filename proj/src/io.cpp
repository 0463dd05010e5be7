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

#include "vruref/io.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

namespace vruref::io
{

using nlohmann::json;

namespace
{

std::string num(double v)
{
  return fmt::format("{:.9g}", v == 0.0 ? 0.0 : v);
}

std::string stamp(double t)
{
  return fmt::format("{:.6f}", t);
}

[[noreturn]] void fail(std::string_view file, std::size_t line, const std::string & what)
{
  throw SchemaError(fmt::format("{} line {}: {}", file, line, what));
}

double parse_double(std::string_view text, std::string_view file, std::size_t line)
{
  double v = 0.0;
  const auto * end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    fail(file, line, fmt::format("not a finite number: '{}'", text));
  }
  return v;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? line.npos : pos - start));
    if (pos == std::string_view::npos) {
      break;
    }
    start = pos + 1;
  }
  return out;
}

std::string_view trim_cr(std::string_view s)
{
  if (!s.empty() && s.back() == '\r') {
    s.remove_suffix(1);
  }
  return s;
}

// Reads the version and column lines of a CSV file and calls `row` for each data line.
template <typename Row>
void read_csv(std::istream & is, std::string_view file, std::string_view columns, Row row)
{
  std::string line;
  std::size_t n = 0;
  if (!std::getline(is, line)) {
    fail(file, 1, "empty file");
  }
  ++n;
  if (trim_cr(line) != csv_header_line()) {
    fail(file, n, fmt::format("unsupported format version line '{}'", trim_cr(line)));
  }
  if (!std::getline(is, line) || trim_cr(line) != columns) {
    fail(file, 2, fmt::format("expected column header '{}'", columns));
  }
  ++n;
  while (std::getline(is, line)) {
    ++n;
    const auto text = trim_cr(line);
    if (text.empty()) {
      continue;
    }
    row(split(text, ','), n);
  }
}

void check_columns(
  const std::vector<std::string_view> & cols, std::size_t expected, std::string_view file,
  std::size_t line)
{
  if (cols.size() != expected) {
    fail(file, line, fmt::format("expected {} columns, found {}", expected, cols.size()));
  }
}

void check_jsonl_header(const std::string & line, std::string_view file, std::string_view kind)
{
  json h;
  try {
    h = json::parse(line);
  } catch (const json::exception & e) {
    fail(file, 1, std::string("invalid version header: ") + e.what());
  }
  if (!h.is_object() || h.value("format", "") != "vruref" || !h.contains("format_version")) {
    fail(file, 1, "missing vruref version header");
  }
  if (h["format_version"] != kFormatVersion) {
    fail(file, 1, fmt::format("unsupported format_version {}", h["format_version"].dump()));
  }
  if (h.value("kind", "") != kind) {
    fail(file, 1, fmt::format("expected kind '{}', found '{}'", kind, h.value("kind", "")));
  }
}

template <typename Line>
void read_jsonl(std::istream & is, std::string_view file, std::string_view kind, Line on_line)
{
  std::string line;
  if (!std::getline(is, line)) {
    fail(file, 1, "empty file");
  }
  check_jsonl_header(line, file, kind);
  std::size_t n = 1;
  while (std::getline(is, line)) {
    ++n;
    if (trim_cr(line).empty()) {
      continue;
    }
    json j;
    try {
      j = json::parse(line);
      on_line(j, n);
    } catch (const SchemaError &) {
      throw;
    } catch (const std::exception & e) {
      fail(file, n, e.what());
    }
  }
}

double get_number(const json & j, const char * key)
{
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw UsageError(fmt::format("field '{}' missing or not a number", key));
  }
  return j.at(key).get<double>();
}

std::string detection_json(const AnnotatedDetection & a)
{
  return fmt::format(
    R"({{"idx":{},"range":{},"azimuth":{},"vr":{},"amp":{},"gx":{:.6f},"gy":{:.6f}}})", a.index,
    num(a.detection.range), num(a.detection.azimuth), num(a.detection.radial_velocity),
    num(a.detection.amplitude), a.global.x(), a.global.y());
}

AnnotatedDetection parse_detection(const json & j, double t, int sensor_id)
{
  AnnotatedDetection a;
  a.index = j.at("idx").get<std::size_t>();
  a.detection.timestamp = t;
  a.detection.sensor_id = sensor_id;
  a.detection.range = get_number(j, "range");
  a.detection.azimuth = get_number(j, "azimuth");
  a.detection.radial_velocity = get_number(j, "vr");
  a.detection.amplitude = get_number(j, "amp");
  a.global = {get_number(j, "gx"), get_number(j, "gy")};
  return a;
}

std::string_view quality_name(GnssQuality q)
{
  switch (q) {
    case GnssQuality::FixRtk:
      return "FIX_RTK";
    case GnssQuality::FixFloat:
      return "FIX_FLOAT";
    case GnssQuality::Degraded:
      return "DEGRADED";
  }
  return "DEGRADED";
}

}  // namespace

std::string csv_header_line()
{
  return fmt::format("# {}", kFormatTag);
}

std::string jsonl_header_line(std::string_view kind)
{
  return fmt::format(R"({{"format":"vruref","format_version":{},"kind":"{}"}})", kFormatVersion, kind);
}

void write_gnss(std::ostream & os, std::span<const GnssSample> samples)
{
  os << csv_header_line() << "\nt,x,y,quality\n";
  for (const auto & s : samples) {
    os << fmt::format("{},{:.6f},{:.6f},{}\n", stamp(s.timestamp), s.x, s.y, quality_name(s.quality));
  }
}

std::vector<GnssSample> read_gnss(std::istream & is)
{
  std::vector<GnssSample> out;
  read_csv(is, "gnss.csv", "t,x,y,quality", [&](const auto & cols, std::size_t line) {
    check_columns(cols, 4, "gnss.csv", line);
    GnssSample s;
    s.timestamp = parse_double(cols[0], "gnss.csv", line);
    s.x = parse_double(cols[1], "gnss.csv", line);
    s.y = parse_double(cols[2], "gnss.csv", line);
    if (cols[3] == "FIX_RTK") {
      s.quality = GnssQuality::FixRtk;
    } else if (cols[3] == "FIX_FLOAT") {
      s.quality = GnssQuality::FixFloat;
    } else if (cols[3] == "DEGRADED") {
      s.quality = GnssQuality::Degraded;
    } else {
      fail("gnss.csv", line, fmt::format("unknown quality '{}'", cols[3]));
    }
    if (!out.empty() && !(s.timestamp > out.back().timestamp)) {
      fail("gnss.csv", line, "timestamps must be strictly increasing");
    }
    out.push_back(s);
  });
  return out;
}

void write_imu(std::ostream & os, std::span<const ImuSample> samples)
{
  os << csv_header_line() << "\nt,yaw_rate,accel,yaw\n";
  for (const auto & s : samples) {
    os << fmt::format(
      "{},{},{},{}\n", stamp(s.timestamp), num(s.yaw_rate), num(s.accel_forward),
      std::isfinite(s.yaw) ? num(s.yaw) : std::string{});
  }
}

std::vector<ImuSample> read_imu(std::istream & is)
{
  std::vector<ImuSample> out;
  read_csv(is, "imu.csv", "t,yaw_rate,accel,yaw", [&](const auto & cols, std::size_t line) {
    check_columns(cols, 4, "imu.csv", line);
    ImuSample s;
    s.timestamp = parse_double(cols[0], "imu.csv", line);
    s.yaw_rate = parse_double(cols[1], "imu.csv", line);
    s.accel_forward = parse_double(cols[2], "imu.csv", line);
    if (!cols[3].empty()) {
      s.yaw = parse_double(cols[3], "imu.csv", line);
    }
    if (!out.empty() && !(s.timestamp > out.back().timestamp)) {
      fail("imu.csv", line, "timestamps must be strictly increasing");
    }
    out.push_back(s);
  });
  return out;
}

void write_states(std::ostream & os, std::span<const TrajectoryState> states)
{
  os << csv_header_line() << "\nt,x,y,yaw,speed,yaw_rate\n";
  for (const auto & s : states) {
    os << fmt::format(
      "{},{:.6f},{:.6f},{},{},{}\n", stamp(s.timestamp), s.pose.x, s.pose.y, num(s.pose.yaw),
      num(s.speed), num(s.yaw_rate));
  }
}

std::vector<TrajectoryState> read_states(std::istream & is)
{
  std::vector<TrajectoryState> out;
  constexpr std::string_view file = "truth_traj.csv";
  read_csv(is, file, "t,x,y,yaw,speed,yaw_rate", [&](const auto & cols, std::size_t line) {
    check_columns(cols, 6, file, line);
    TrajectoryState s;
    s.timestamp = parse_double(cols[0], file, line);
    s.pose = Pose{
      parse_double(cols[1], file, line), parse_double(cols[2], file, line),
      wrap_angle(parse_double(cols[3], file, line)), Frame::global()};
    s.speed = parse_double(cols[4], file, line);
    s.yaw_rate = parse_double(cols[5], file, line);
    if (!out.empty() && !(s.timestamp > out.back().timestamp)) {
      fail(file, line, "timestamps must be strictly increasing");
    }
    out.push_back(s);
  });
  return out;
}

void write_radar(std::ostream & os, std::span<const RadarScan> scans)
{
  os << jsonl_header_line("radar") << '\n';
  for (const auto & scan : scans) {
    std::string points;
    for (const auto & d : scan.detections) {
      if (!points.empty()) {
        points += ',';
      }
      points += fmt::format(
        R"({{"range":{},"azimuth":{},"vr":{},"amp":{}}})", num(d.range), num(d.azimuth),
        num(d.radial_velocity), num(d.amplitude));
    }
    os << fmt::format(
      R"({{"t":{},"sensor_id":{},"points":[{}]}})", stamp(scan.timestamp), scan.sensor_id, points)
       << '\n';
  }
}

std::vector<RadarScan> read_radar(std::istream & is)
{
  std::vector<RadarScan> out;
  read_jsonl(is, "radar.jsonl", "radar", [&](const json & j, std::size_t) {
    RadarScan scan;
    scan.timestamp = get_number(j, "t");
    scan.sensor_id = j.at("sensor_id").get<int>();
    for (const auto & p : j.at("points")) {
      RadarDetection d;
      d.timestamp = scan.timestamp;
      d.sensor_id = scan.sensor_id;
      d.range = get_number(p, "range");
      d.azimuth = get_number(p, "azimuth");
      d.radial_velocity = get_number(p, "vr");
      d.amplitude = get_number(p, "amp");
      if (d.range < 0.0) {
        throw UsageError("negative range");
      }
      scan.detections.push_back(d);
    }
    out.push_back(std::move(scan));
  });
  return out;
}

void write_truth_labels(std::ostream & os, std::span<const sim::TruthLabel> labels)
{
  os << jsonl_header_line("truth_labels") << '\n';
  for (const auto & l : labels) {
    os << fmt::format(
      R"({{"t":{},"idx":{},"label":"{}"}})", stamp(l.timestamp), l.index,
      l.label == PointLabel::Vru ? "vru" : "clutter")
       << '\n';
  }
}

std::vector<sim::TruthLabel> read_truth_labels(std::istream & is)
{
  std::vector<sim::TruthLabel> out;
  read_jsonl(is, "truth_labels.jsonl", "truth_labels", [&](const json & j, std::size_t) {
    const std::string label = j.at("label").get<std::string>();
    if (label != "vru" && label != "clutter") {
      throw UsageError("label must be \"vru\" or \"clutter\"");
    }
    out.push_back(
      {get_number(j, "t"), j.at("idx").get<std::size_t>(),
       label == "vru" ? PointLabel::Vru : PointLabel::Clutter});
  });
  return out;
}

void write_labeled(std::ostream & os, std::span<const LabeledScan> scans)
{
  os << jsonl_header_line("labeled") << '\n';
  for (const auto & s : scans) {
    auto list = [](const std::vector<AnnotatedDetection> & v) {
      std::string out;
      for (const auto & a : v) {
        if (!out.empty()) {
          out += ',';
        }
        out += detection_json(a);
      }
      return out;
    };
    std::string bounding = "null";
    if (s.bounding) {
      bounding = fmt::format(
        R"({{"cx":{:.6f},"cy":{:.6f},"ax_along":{},"ax_across":{},"orientation":{}}})",
        s.bounding->center.x(), s.bounding->center.y(), num(s.bounding->ax_along),
        num(s.bounding->ax_across), num(s.bounding->orientation));
    }
    const auto & v = s.vru_state;
    os << fmt::format(
            R"({{"t":{},"sensor_id":{},"track_id":{},"vru_kind":"{}",)"
            R"("vru_state":{{"x":{:.6f},"y":{:.6f},"yaw":{},"speed":{},"yaw_rate":{}}},)"
            R"("bounding":{},"assigned":[{}],"rejected":[{}]}})",
            stamp(s.timestamp), s.sensor_id, s.track_id, to_string(s.vru_kind), v.pose.x,
            v.pose.y, num(v.pose.yaw), num(v.speed), num(v.yaw_rate), bounding,
            list(s.assigned), list(s.rejected))
       << '\n';
  }
}

std::vector<LabeledScan> read_labeled(std::istream & is)
{
  std::vector<LabeledScan> out;
  read_jsonl(is, "labeled.jsonl", "labeled", [&](const json & j, std::size_t) {
    LabeledScan s;
    s.timestamp = get_number(j, "t");
    s.sensor_id = j.at("sensor_id").get<int>();
    s.track_id = j.at("track_id").get<int>();
    s.vru_kind = parse_vru_kind(j.at("vru_kind").get<std::string>());
    const json & v = j.at("vru_state");
    s.vru_state.timestamp = s.timestamp;
    s.vru_state.pose = Pose{
      get_number(v, "x"), get_number(v, "y"), get_number(v, "yaw"), Frame::global()};
    s.vru_state.speed = get_number(v, "speed");
    s.vru_state.yaw_rate = get_number(v, "yaw_rate");
    const json & b = j.at("bounding");
    if (!b.is_null()) {
      OrientedEllipse e;
      e.center = {get_number(b, "cx"), get_number(b, "cy")};
      e.ax_along = get_number(b, "ax_along");
      e.ax_across = get_number(b, "ax_across");
      e.orientation = get_number(b, "orientation");
      s.bounding = e;
    }
    for (const auto & a : j.at("assigned")) {
      s.assigned.push_back(parse_detection(a, s.timestamp, s.sensor_id));
    }
    for (const auto & r : j.at("rejected")) {
      s.rejected.push_back(parse_detection(r, s.timestamp, s.sensor_id));
    }
    out.push_back(std::move(s));
  });
  return out;
}

namespace
{

const std::set<std::string> kConfigKeys = {
  "format_version",
  "preset",
  "seed",
  "vru_kind",
  "speed",
  "course_half_width",
  "course_center",
  "duration",
  "gnss_rate",
  "imu_rate",
  "radar_rate",
  "gnss_sigma",
  "perturbation",
  "imu_yaw_rate_sigma",
  "imu_yaw_rate_bias",
  "imu_yaw_rate_bias_sigma",
  "imu_accel_sigma",
  "imu_accel_bias_sigma",
  "detections_at_ref",
  "detection_ref_range",
  "scatter_sigma",
  "doppler_sigma",
  "amplitude_ref_db",
  "amplitude_sigma_db",
  "clutter_rate",
  "clutter_amplitude_ref_db",
  "range_resolution",
  "azimuth_resolution",
  "doppler_resolution",
  "ego_pose",
  "mounts",
};

const std::set<std::string> kPerturbationKeys = {
  "start", "duration", "bias", "onset", "random_walk_sigma", "flagged"};
const std::set<std::string> kPoseKeys = {"x", "y", "yaw"};
const std::set<std::string> kMountKeys = {"sensor_id", "x", "y", "yaw", "fov_azimuth", "max_range"};

void reject_unknown(const json & j, const std::set<std::string> & known, std::string_view where)
{
  for (const auto & [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw UsageError(fmt::format("scenario config: unknown key '{}{}'", where, key));
    }
  }
}

double number_field(const json & j, const std::string & key, std::string_view where)
{
  const json & v = j.at(key);
  if (!v.is_number()) {
    throw UsageError(fmt::format("scenario config: field '{}{}' must be a number", where, key));
  }
  return v.get<double>();
}

Point2 point_field(const json & j, const std::string & key, std::string_view where)
{
  const json & v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw UsageError(
      fmt::format("scenario config: field '{}{}' must be a [x, y] number pair", where, key));
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

Pose pose_field(const json & j, std::string_view where, Frame frame)
{
  reject_unknown(j, kPoseKeys, where);
  Pose p;
  p.x = number_field(j, "x", where);
  p.y = number_field(j, "y", where);
  p.yaw = wrap_angle(number_field(j, "yaw", where));
  p.frame = frame;
  return p;
}

void set_number(const json & j, const char * key, double & target)
{
  if (j.contains(key)) {
    target = number_field(j, key, "");
  }
}

json pose_json(const Pose & p)
{
  return json{{"x", p.x}, {"y", p.y}, {"yaw", p.yaw}};
}

json config_to_json(const sim::ScenarioConfig & c)
{
  json j;
  j["format_version"] = kFormatVersion;
  j["seed"] = c.seed;
  j["vru_kind"] = std::string(to_string(c.vru_kind));
  j["speed"] = c.speed;
  j["course_half_width"] = c.course_half_width;
  j["course_center"] = {c.course_center.x(), c.course_center.y()};
  j["duration"] = c.duration;
  j["gnss_rate"] = c.gnss_rate;
  j["imu_rate"] = c.imu_rate;
  j["radar_rate"] = c.radar_rate;
  j["gnss_sigma"] = c.gnss_sigma;
  if (c.perturbation) {
    const auto & p = *c.perturbation;
    j["perturbation"] = {
      {"start", p.start},
      {"duration", p.duration},
      {"bias", {p.bias.x(), p.bias.y()}},
      {"onset", p.onset},
      {"random_walk_sigma", p.random_walk_sigma},
      {"flagged", p.flagged}};
  } else {
    j["perturbation"] = nullptr;
  }
  j["imu_yaw_rate_sigma"] = c.imu_yaw_rate_sigma;
  j["imu_yaw_rate_bias"] = c.imu_yaw_rate_bias;
  j["imu_yaw_rate_bias_sigma"] = c.imu_yaw_rate_bias_sigma;
  j["imu_accel_sigma"] = c.imu_accel_sigma;
  j["imu_accel_bias_sigma"] = c.imu_accel_bias_sigma;
  j["detections_at_ref"] = c.detections_at_ref;
  j["detection_ref_range"] = c.detection_ref_range;
  j["scatter_sigma"] = {c.scatter_sigma.x(), c.scatter_sigma.y()};
  j["doppler_sigma"] = c.doppler_sigma;
  j["amplitude_ref_db"] = c.amplitude_ref_db;
  j["amplitude_sigma_db"] = c.amplitude_sigma_db;
  j["clutter_rate"] = c.clutter_rate;
  j["clutter_amplitude_ref_db"] = c.clutter_amplitude_ref_db;
  j["range_resolution"] = c.range_resolution;
  j["azimuth_resolution"] = c.azimuth_resolution;
  j["doppler_resolution"] = c.doppler_resolution;
  j["ego_pose"] = pose_json(c.ego_pose);
  j["mounts"] = json::array();
  for (const auto & m : c.mounts) {
    j["mounts"].push_back(
      {{"sensor_id", m.sensor_id},
       {"x", m.pose_in_ego.x},
       {"y", m.pose_in_ego.y},
       {"yaw", m.pose_in_ego.yaw},
       {"fov_azimuth", m.fov_azimuth},
       {"max_range", m.max_range}});
  }
  return j;
}

sim::ScenarioConfig config_from_json(const json & j)
{
  if (!j.is_object()) {
    throw UsageError("scenario config: expected a JSON object");
  }
  reject_unknown(j, kConfigKeys, "");
  if (j.contains("format_version") && j["format_version"] != kFormatVersion) {
    throw UsageError(
      fmt::format("scenario config: unsupported format_version {}", j["format_version"].dump()));
  }
  if (!j.contains("seed")) {
    throw UsageError("scenario config: missing required key 'seed'");
  }
  if (!j.contains("preset") && !j.contains("vru_kind")) {
    throw UsageError("scenario config: missing required key 'vru_kind' (or 'preset')");
  }
  if (!j["seed"].is_number_unsigned()) {
    throw UsageError("scenario config: field 'seed' must be a non-negative integer");
  }

  sim::ScenarioConfig c;
  c.mounts = sim::default_mounts();
  if (j.contains("preset")) {
    if (!j["preset"].is_number_integer()) {
      throw UsageError("scenario config: field 'preset' must be an integer");
    }
    c = sim::preset(j["preset"].get<int>());
  }
  c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("vru_kind")) {
    if (!j["vru_kind"].is_string()) {
      throw UsageError("scenario config: field 'vru_kind' must be a string");
    }
    try {
      c.vru_kind = parse_vru_kind(j["vru_kind"].get<std::string>());
    } catch (const UsageError & e) {
      throw UsageError(std::string("scenario config: ") + e.what());
    }
  }
  set_number(j, "speed", c.speed);
  set_number(j, "course_half_width", c.course_half_width);
  if (j.contains("course_center")) {
    c.course_center = point_field(j, "course_center", "");
  }
  set_number(j, "duration", c.duration);
  set_number(j, "gnss_rate", c.gnss_rate);
  set_number(j, "imu_rate", c.imu_rate);
  set_number(j, "radar_rate", c.radar_rate);
  set_number(j, "gnss_sigma", c.gnss_sigma);
  if (j.contains("perturbation")) {
    const json & p = j["perturbation"];
    if (p.is_null()) {
      c.perturbation.reset();
    } else {
      if (!p.is_object()) {
        throw UsageError("scenario config: field 'perturbation' must be an object or null");
      }
      reject_unknown(p, kPerturbationKeys, "perturbation.");
      sim::Perturbation pert;
      if (p.contains("start")) pert.start = number_field(p, "start", "perturbation.");
      if (p.contains("duration")) pert.duration = number_field(p, "duration", "perturbation.");
      if (p.contains("bias")) pert.bias = point_field(p, "bias", "perturbation.");
      if (p.contains("onset")) pert.onset = number_field(p, "onset", "perturbation.");
      if (p.contains("random_walk_sigma")) {
        pert.random_walk_sigma = number_field(p, "random_walk_sigma", "perturbation.");
      }
      if (p.contains("flagged")) {
        if (!p["flagged"].is_boolean()) {
          throw UsageError("scenario config: field 'perturbation.flagged' must be a boolean");
        }
        pert.flagged = p["flagged"].get<bool>();
      }
      c.perturbation = pert;
    }
  }
  set_number(j, "imu_yaw_rate_sigma", c.imu_yaw_rate_sigma);
  set_number(j, "imu_yaw_rate_bias", c.imu_yaw_rate_bias);
  set_number(j, "imu_yaw_rate_bias_sigma", c.imu_yaw_rate_bias_sigma);
  set_number(j, "imu_accel_sigma", c.imu_accel_sigma);
  set_number(j, "imu_accel_bias_sigma", c.imu_accel_bias_sigma);
  set_number(j, "detections_at_ref", c.detections_at_ref);
  set_number(j, "detection_ref_range", c.detection_ref_range);
  if (j.contains("scatter_sigma")) {
    c.scatter_sigma = point_field(j, "scatter_sigma", "");
  }
  set_number(j, "doppler_sigma", c.doppler_sigma);
  set_number(j, "amplitude_ref_db", c.amplitude_ref_db);
  set_number(j, "amplitude_sigma_db", c.amplitude_sigma_db);
  set_number(j, "clutter_rate", c.clutter_rate);
  set_number(j, "clutter_amplitude_ref_db", c.clutter_amplitude_ref_db);
  set_number(j, "range_resolution", c.range_resolution);
  set_number(j, "azimuth_resolution", c.azimuth_resolution);
  set_number(j, "doppler_resolution", c.doppler_resolution);
  if (j.contains("ego_pose")) {
    c.ego_pose = pose_field(j["ego_pose"], "ego_pose.", Frame::global());
  }
  if (j.contains("mounts")) {
    if (!j["mounts"].is_array()) {
      throw UsageError("scenario config: field 'mounts' must be an array");
    }
    c.mounts.clear();
    for (const auto & m : j["mounts"]) {
      reject_unknown(m, kMountKeys, "mounts[].");
      SensorMount mount;
      if (!m.contains("sensor_id") || !m["sensor_id"].is_number_integer()) {
        throw UsageError("scenario config: field 'mounts[].sensor_id' must be an integer");
      }
      mount.sensor_id = m["sensor_id"].get<int>();
      mount.pose_in_ego = Pose{
        number_field(m, "x", "mounts[]."), number_field(m, "y", "mounts[]."),
        wrap_angle(number_field(m, "yaw", "mounts[].")), Frame::ego()};
      mount.fov_azimuth = number_field(m, "fov_azimuth", "mounts[].");
      mount.max_range = number_field(m, "max_range", "mounts[].");
      c.mounts.push_back(mount);
    }
  }
  sim::validate(c);
  return c;
}

}  // namespace

sim::ScenarioConfig parse_scenario_config(std::string_view json_text)
{
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception & e) {
    throw UsageError(std::string("scenario config: invalid JSON: ") + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception & e) {
    throw UsageError(std::string("scenario config: ") + e.what());
  }
}

std::string scenario_config_json(const sim::ScenarioConfig & cfg)
{
  return config_to_json(cfg).dump(2);
}

std::string manifest_json(const Manifest & m)
{
  json j;
  j["format"] = "vruref";
  j["format_version"] = kFormatVersion;
  j["kind"] = "manifest";
  j["seed"] = m.config.seed;
  j["config"] = config_to_json(m.config);
  j["counts"] = {
    {"gnss", m.gnss_count},
    {"imu", m.imu_count},
    {"radar_scans", m.scan_count},
    {"truth_labels", m.label_count},
    {"truth_traj", m.truth_count}};
  return j.dump(2) + "\n";
}

Manifest parse_manifest(std::string_view json_text)
{
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception & e) {
    throw SchemaError(std::string("scenario.json: invalid JSON: ") + e.what());
  }
  if (j.value("format", "") != "vruref" || j.value("kind", "") != "manifest") {
    throw SchemaError("scenario.json: not a vruref manifest");
  }
  if (j["format_version"] != kFormatVersion) {
    throw SchemaError(
      fmt::format("scenario.json: unsupported format_version {}", j["format_version"].dump()));
  }
  Manifest m;
  try {
    m.config = config_from_json(j.at("config"));
    const json & c = j.at("counts");
    m.gnss_count = c.at("gnss").get<std::size_t>();
    m.imu_count = c.at("imu").get<std::size_t>();
    m.scan_count = c.at("radar_scans").get<std::size_t>();
    m.label_count = c.at("truth_labels").get<std::size_t>();
    m.truth_count = c.at("truth_traj").get<std::size_t>();
  } catch (const json::exception & e) {
    throw SchemaError(std::string("scenario.json: ") + e.what());
  }
  return m;
}

}  // namespace vruref::io
