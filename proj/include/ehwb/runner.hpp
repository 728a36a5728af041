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

#ifndef EHWB_RUNNER_HPP_
#define EHWB_RUNNER_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "ehwb/config.hpp"
#include "ehwb/precision.hpp"

namespace ehwb {

std::string version_string();

struct RunOutcome {
  int exit_code = 0;  // 0 ok, 2 config error, 3 precision failure
  std::vector<std::string> messages;
};

// Executes every sweep point, writes one CSV per observable plus
// run_manifest.txt into config.output_dir. Sweep points may run on worker
// threads (WORKBENCH_MAX_THREADS caps the fan-out); rows are buffered and
// written in sweep order, so identical configs byte-reproduce all CSVs up
// to the wall_time_ms column.
RunOutcome run_experiment(const ExperimentConfig& config);

// Deviations between the Gaussian pipeline and the spin-ED oracle for one
// chain/subsystem, at the given working precision.
struct OracleComparison {
  Real entropy_dev;
  Real spectrum_dev;    // many-body levels vs Schmidt weights
  Real covariance_dev;  // full-system covariance (N <= 8 only, else 0)
  int ed_degeneracy = 1;
};

OracleComparison oracle_compare(const ChainSpec& chain,
                                const SubsystemSpec& subsystem,
                                const PrecisionContext& ctx, int levels);

// Runs both pipelines for every sweep point (all N <= 12), prints one
// line per point and observable deviation; returns 1 if any deviation
// exceeds 1e-8, else 0.
int oracle_check(const ExperimentConfig& config, std::ostream& report);

}  // namespace ehwb

#endif  // EHWB_RUNNER_HPP_
