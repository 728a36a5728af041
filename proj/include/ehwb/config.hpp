// Copyright 2026 The ehwb Authors - All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EHWB_CONFIG_HPP_
#define EHWB_CONFIG_HPP_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ehwb/chain.hpp"

namespace ehwb {

// Flat, line-oriented key = value experiment description; repeated keys
// and whitespace-separated tokens form lists. See config_schema_text().
struct DefectRequest {
  DefectKind kind = DefectKind::kEnergy;
  std::string position;  // integer | center | boundary | antipodal
  std::string strength;  // decimal | "jstar" (bound to the jstar sweep)
};

struct ObservableRequest {
  std::string name;
  std::map<std::string, std::string> params;
};

struct ExperimentConfig {
  std::vector<int> n_values;
  std::string subsystem_start = "0";
  std::string subsystem_length = "half";  // "half" or integer
  int boundary_sign = -1;
  double precision_ratio = 1.5;
  long dps_min = 30;
  std::vector<DefectRequest> defects;
  std::vector<std::string> jstar_values;
  std::vector<ObservableRequest> observables;
  std::string output_dir = "out";
  std::vector<std::string> raw_lines;  // config echo for the manifest
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_file(const std::string& path);

// Cross-field validation; throws ConfigError.
void validate_config(const ExperimentConfig& config);

// One sweep point with geometry resolved to explicit bond indices.
struct ResolvedPoint {
  int n = 0;
  std::string jstar;  // empty when there is no jstar sweep
  SubsystemSpec subsystem;
  std::vector<DefectSpec> defects;
  long dps = 0;
};

std::vector<ResolvedPoint> resolve_sweep(const ExperimentConfig& config);

// Resolves a single DefectRequest list against (n, subsystem, jstar).
std::vector<DefectSpec> resolve_defects(const std::vector<DefectRequest>& reqs,
                                        int n, const SubsystemSpec& subsystem,
                                        const std::string& jstar);

SubsystemSpec resolve_subsystem(const ExperimentConfig& config, int n);

std::string config_schema_text();

// ChainSpec round trip through the config defect grammar (serialization
// used by the manifest).
std::string describe_defects(const std::vector<DefectSpec>& defects);

}  // namespace ehwb

#endif  // EHWB_CONFIG_HPP_
