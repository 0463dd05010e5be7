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

#ifndef VRUREF__IO_HPP_
#define VRUREF__IO_HPP_

#include "vruref/annotation.hpp"
#include "vruref/simulator.hpp"
#include "vruref/trajectory.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vruref::io
{

// Every file starts with a version line: "# vruref format_version=1" for CSV
// and PGM, {"format":"vruref","format_version":1,"kind":...} for JSON-Lines.
constexpr int kFormatVersion = 1;

/// Malformed input. The message names the file kind and line number.
class SchemaError : public UsageError
{
public:
  using UsageError::UsageError;
};

std::string csv_header_line();
std::string jsonl_header_line(std::string_view kind);

// gnss.csv: t,x,y,quality
void write_gnss(std::ostream & os, std::span<const GnssSample> samples);
std::vector<GnssSample> read_gnss(std::istream & is);

// imu.csv: t,yaw_rate,accel,yaw (yaw empty when not reported)
void write_imu(std::ostream & os, std::span<const ImuSample> samples);
std::vector<ImuSample> read_imu(std::istream & is);

// truth_traj.csv: t,x,y,yaw,speed,yaw_rate
void write_states(std::ostream & os, std::span<const TrajectoryState> states);
std::vector<TrajectoryState> read_states(std::istream & is);

// radar.jsonl: {"t","sensor_id","points":[{"range","azimuth","vr","amp"}]}
void write_radar(std::ostream & os, std::span<const RadarScan> scans);
std::vector<RadarScan> read_radar(std::istream & is);

// truth_labels.jsonl: {"t","idx","label":"vru"|"clutter"}
void write_truth_labels(std::ostream & os, std::span<const sim::TruthLabel> labels);
std::vector<sim::TruthLabel> read_truth_labels(std::istream & is);

// labeled.jsonl: one LabeledScan per line.
void write_labeled(std::ostream & os, std::span<const LabeledScan> scans);
std::vector<LabeledScan> read_labeled(std::istream & is);

/// Scenario config as JSON. Unknown keys are rejected; "seed" and either
/// "preset" or "vru_kind" are required. Values override the preset.
sim::ScenarioConfig parse_scenario_config(std::string_view json_text);
std::string scenario_config_json(const sim::ScenarioConfig & cfg);

struct Manifest
{
  sim::ScenarioConfig config;
  std::size_t gnss_count{0};
  std::size_t imu_count{0};
  std::size_t scan_count{0};
  std::size_t label_count{0};
  std::size_t truth_count{0};
};

std::string manifest_json(const Manifest & manifest);
Manifest parse_manifest(std::string_view json_text);

}  // namespace vruref::io

namespace vruref
{
/// Tag used in the version line of every output file.
inline constexpr std::string_view kFormatTag = "vruref format_version=1";
}  // namespace vruref

#endif  // VRUREF__IO_HPP_
