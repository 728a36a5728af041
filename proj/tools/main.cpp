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

#include <CLI11.hpp>
#include <iostream>

#include "ehwb/config.hpp"
#include "ehwb/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ehwb - entanglement Hamiltonian workbench for defected "
               "free-fermion chains"};
  app.set_version_flag("--version", ehwb::version_string());
  app.require_subcommand(1);

  std::string run_config, check_config, out_override;
  CLI::App* run = app.add_subcommand("run", "execute an experiment config");
  run->add_option("config", run_config, "config file")->required();
  run->add_option("--output-dir", out_override,
                  "override the config's output_dir");

  CLI::App* check = app.add_subcommand(
      "oracle-check",
      "compare the Gaussian pipeline against exact diagonalization (N <= 12)");
  check->add_option("config", check_config, "config file")->required();

  app.add_subcommand("print-config-schema",
                     "print the experiment config grammar");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ehwb::ExperimentConfig cfg = ehwb::parse_config_file(run_config);
      if (!out_override.empty()) cfg.output_dir = out_override;
      ehwb::validate_config(cfg);
      ehwb::RunOutcome outcome = ehwb::run_experiment(cfg);
      for (const std::string& m : outcome.messages) std::cout << m << "\n";
      return outcome.exit_code;
    }
    if (check->parsed()) {
      ehwb::ExperimentConfig cfg = ehwb::parse_config_file(check_config);
      ehwb::validate_config(cfg);
      return ehwb::oracle_check(cfg, std::cout);
    }
    std::cout << ehwb::config_schema_text();
    return 0;
  } catch (const ehwb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ehwb::PrecisionEscalationError& e) {
    std::cerr << "precision failure: " << e.what() << "\n";
    return 3;
  } catch (const ehwb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
