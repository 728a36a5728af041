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

#include "ehwb/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace ehwb {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

int parse_int(const std::string& field, const std::string& s) {
  try {
    size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field, "expected an integer, got '" + s + "'");
  }
}

void check_decimal(const std::string& field, const std::string& s) {
  try {
    Real::parse(s, 64);
  } catch (const Error&) {
    throw ConfigError(field, "expected a decimal value, got '" + s + "'");
  }
}

const std::set<std::string> kObservables = {
    "k_matrix",  "nn_profile", "symmetric_hopping", "entropy", "spectrum",
    "negativity", "fidelity",  "c_eff",             "scaling_fit"};

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = line;
    size_t hash = stripped.find('#');
    if (hash != std::string::npos) stripped = stripped.substr(0, hash);
    stripped = trim(stripped);
    if (stripped.empty()) continue;
    cfg.raw_lines.push_back(stripped);

    size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno),
                        "expected 'key = value'");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (value.empty()) throw ConfigError(key, "empty value");

    if (key == "n") {
      for (const std::string& t : tokens(value)) {
        int n = parse_int("n", t);
        cfg.n_values.push_back(n);
      }
    } else if (key == "subsystem_start") {
      cfg.subsystem_start = value;
    } else if (key == "subsystem_length") {
      cfg.subsystem_length = value;
    } else if (key == "boundary_sign") {
      cfg.boundary_sign = parse_int(key, value);
    } else if (key == "precision_ratio") {
      try {
        cfg.precision_ratio = std::stod(value);
      } catch (const std::exception&) {
        throw ConfigError(key, "expected a number, got '" + value + "'");
      }
    } else if (key == "dps_min") {
      cfg.dps_min = parse_int(key, value);
    } else if (key == "defect") {
      std::vector<std::string> t = tokens(value);
      if (t.empty()) throw ConfigError(key, "empty defect spec");
      DefectRequest d;
      if (t[0] == "energy") {
        d.kind = DefectKind::kEnergy;
        if (t.size() != 3)
          throw ConfigError(key, "energy defect needs: position strength");
        d.position = t[1];
        d.strength = t[2];
      } else if (t[0] == "antiperiodic") {
        d.kind = DefectKind::kAntiperiodic;
        if (t.size() != 2)
          throw ConfigError(key, "antiperiodic defect needs: position");
        d.position = t[1];
        d.strength = "-1";
      } else if (t[0] == "duality") {
        d.kind = DefectKind::kDuality;
        if (t.size() != 2)
          throw ConfigError(key, "duality defect needs: position");
        d.position = t[1];
        d.strength = "1";
      } else {
        throw ConfigError(key, "unknown defect kind '" + t[0] + "'");
      }
      cfg.defects.push_back(std::move(d));
    } else if (key == "jstar") {
      for (const std::string& t : tokens(value)) {
        check_decimal("jstar", t);
        cfg.jstar_values.push_back(t);
      }
    } else if (key == "observable") {
      std::vector<std::string> t = tokens(value);
      if (t.empty()) throw ConfigError(key, "empty observable");
      ObservableRequest o;
      o.name = t[0];
      for (size_t i = 1; i < t.size(); ++i) {
        size_t peq = t[i].find('=');
        if (peq == std::string::npos)
          throw ConfigError(key, "observable parameter must be name=value: '" +
                                     t[i] + "'");
        o.params[t[i].substr(0, peq)] = t[i].substr(peq + 1);
      }
      cfg.observables.push_back(std::move(o));
    } else if (key == "output_dir") {
      cfg.output_dir = value;
    } else {
      throw ConfigError(key, "unknown key");
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open file '" + path + "'");
  return parse_config(in);
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.n_values.empty()) throw ConfigError("n", "at least one N required");
  for (int n : cfg.n_values) {
    if (n < 8 || n % 2 != 0)
      throw ConfigError("n", "N must be even and >= 8, got " +
                                 std::to_string(n));
  }
  if (cfg.boundary_sign != 1 && cfg.boundary_sign != -1)
    throw ConfigError("boundary_sign", "must be +1 or -1");
  if (cfg.precision_ratio < 0.5 || cfg.precision_ratio > 2.0)
    throw ConfigError("precision_ratio", "must lie in [0.5, 2.0]");
  if (cfg.dps_min < 30) throw ConfigError("dps_min", "must be >= 30");
  if (cfg.observables.empty())
    throw ConfigError("observable", "at least one observable required");

  bool has_jstar_defect = false;
  for (const DefectRequest& d : cfg.defects) {
    if (d.position != "center" && d.position != "boundary" &&
        d.position != "antipodal") {
      parse_int("defect position", d.position);
    }
    if (d.kind == DefectKind::kEnergy) {
      if (d.strength == "jstar")
        has_jstar_defect = true;
      else
        check_decimal("defect strength", d.strength);
    }
  }
  if (has_jstar_defect && cfg.jstar_values.empty())
    throw ConfigError("jstar",
                      "a defect is bound to 'jstar' but no jstar list given");

  bool has_entropy = false;
  for (const ObservableRequest& o : cfg.observables)
    if (o.name == "entropy") has_entropy = true;

  for (const ObservableRequest& o : cfg.observables) {
    if (!kObservables.count(o.name))
      throw ConfigError("observable", "unknown observable '" + o.name + "'");
    if (o.name == "negativity") {
      auto it = o.params.find("cut");
      if (it == o.params.end())
        throw ConfigError("observable negativity",
                          "requires cut=<sites|half>");
      if (it->second != "half") parse_int("negativity cut", it->second);
    }
    if (o.name == "spectrum") {
      auto it = o.params.find("count");
      if (it == o.params.end())
        throw ConfigError("observable spectrum", "requires count=<levels>");
      if (parse_int("spectrum count", it->second) < 1)
        throw ConfigError("observable spectrum", "count must be >= 1");
    }
    if (o.name == "fidelity") {
      if (!o.params.count("partner"))
        throw ConfigError("observable fidelity",
                          "requires partner=<config path>");
    }
    if (o.name == "c_eff" && cfg.jstar_values.empty())
      throw ConfigError("observable c_eff", "requires a jstar list");
    if (o.name == "scaling_fit") {
      if (cfg.n_values.size() < 3)
        throw ConfigError("observable scaling_fit",
                          "requires an N sweep with >= 3 sizes");
      if (!has_entropy)
        throw ConfigError("observable scaling_fit",
                          "requires the entropy observable");
    }
  }
}

SubsystemSpec resolve_subsystem(const ExperimentConfig& cfg, int n) {
  SubsystemSpec sub;
  sub.start = parse_int("subsystem_start", cfg.subsystem_start);
  if (cfg.subsystem_length == "half")
    sub.length = n / 2;
  else
    sub.length = parse_int("subsystem_length", cfg.subsystem_length);
  if (sub.length < 1 || sub.length >= n)
    throw ConfigError("subsystem_length",
                      "subsystem must satisfy 1 <= L < N");
  if (sub.start < 0 || sub.start >= n)
    throw ConfigError("subsystem_start", "start must lie in [0, N)");
  return sub;
}

std::vector<DefectSpec> resolve_defects(const std::vector<DefectRequest>& reqs,
                                        int n, const SubsystemSpec& subsystem,
                                        const std::string& jstar) {
  std::vector<DefectSpec> out;
  for (const DefectRequest& r : reqs) {
    int bond;
    if (r.position == "center")
      bond = centered_defect_bond(subsystem);
    else if (r.position == "boundary")
      bond = boundary_bond(subsystem, n);
    else if (r.position == "antipodal")
      bond = antipodal_bond(centered_defect_bond(subsystem), n);
    else
      bond = parse_int("defect position", r.position);
    if (bond < 0 || bond >= n)
      throw ConfigError("defect position", "bond " + std::to_string(bond) +
                                               " out of range for N=" +
                                               std::to_string(n));
    DefectSpec d;
    d.kind = r.kind;
    d.bond = bond;
    d.strength = (r.kind == DefectKind::kEnergy && r.strength == "jstar")
                     ? jstar
                     : r.strength;
    if (r.kind == DefectKind::kEnergy && d.strength == "jstar")
      throw ConfigError("defect strength", "no jstar value available");
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<ResolvedPoint> resolve_sweep(const ExperimentConfig& cfg) {
  validate_config(cfg);
  std::vector<ResolvedPoint> out;
  std::vector<std::string> jstars = cfg.jstar_values;
  if (jstars.empty()) jstars.push_back("");
  for (int n : cfg.n_values) {
    for (const std::string& js : jstars) {
      ResolvedPoint p;
      p.n = n;
      p.jstar = js;
      p.subsystem = resolve_subsystem(cfg, n);
      p.defects = resolve_defects(cfg.defects, n, p.subsystem, js);
      p.dps = std::max<long>(
          cfg.dps_min,
          static_cast<long>(std::ceil(cfg.precision_ratio * n)));
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::string describe_defects(const std::vector<DefectSpec>& defects) {
  if (defects.empty()) return "uniform";
  std::string out;
  for (size_t i = 0; i < defects.size(); ++i) {
    if (i) out += ";";
    const DefectSpec& d = defects[i];
    switch (d.kind) {
      case DefectKind::kEnergy:
        out += "energy@" + std::to_string(d.bond) + "=" + d.strength;
        break;
      case DefectKind::kAntiperiodic:
        out += "antiperiodic@" + std::to_string(d.bond);
        break;
      case DefectKind::kDuality:
        out += "duality@" + std::to_string(d.bond);
        break;
    }
  }
  return out;
}

std::string config_schema_text() {
  return R"(# ehwb experiment config: flat key = value lines, '#' comments.
# Repeated keys and whitespace-separated tokens form sweep lists.

n = 64 96 128            # system sizes (even, >= 8); list = sweep
subsystem_start = 0      # first site of A
subsystem_length = half  # 'half' (N/2) or an integer
boundary_sign = -1       # fermion ring sector: -1 (default) or +1
precision_ratio = 1.5    # dps = ceil(ratio * N), up to 2.0
dps_min = 30             # lower bound on working decimal digits

# defect = <kind> <position> [strength]
#   kind:     energy | antiperiodic | duality
#   position: bond index | center | boundary | antipodal
#   strength: decimal (energy only) or 'jstar' to bind to the jstar sweep
defect = energy center jstar
jstar = 0 0.2 0.5 1      # sweep of defect strengths

# observable = <name> [param=value ...]
#   entropy
#   spectrum count=<levels>       (lowest many-body entanglement energies)
#   negativity cut=<sites|half>   (fermionic log negativity across the cut)
#   k_matrix                      (entanglement Hamiltonian, CSV triplets)
#   nn_profile                    (nearest-neighbor couplings of K)
#   symmetric_hopping             (anti-diagonal couplings of K)
#   fidelity partner=<config>     (vs. the chain of a partner config)
#   c_eff                         (effective central charge at each jstar)
#   scaling_fit                   (entropy scaling fit over the N sweep)
observable = entropy

output_dir = out         # one CSV per observable + run_manifest.txt
)";
}

}  // namespace ehwb
