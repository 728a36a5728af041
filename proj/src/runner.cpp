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

#include "ehwb/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <utility>

#include "ehwb/analysis.hpp"
#include "ehwb/ed.hpp"
#include "ehwb/gaussian.hpp"
#include "ehwb/observables.hpp"

namespace ehwb {

std::string version_string() { return "ehwb 0.1.0"; }

namespace {

using Clock = std::chrono::steady_clock;

long long ms_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                               t0)
      .count();
}

struct Row {
  std::string observable;
  std::string pos1, pos2;
  std::string value;
  long long wall_ms = 0;
};

struct PointData {
  ResolvedPoint point;
  long dps_used = 0;
  std::vector<Row> rows;
  bool failed = false;
  std::string failure;
  bool escalated = false;
  Real entropy_value;  // for scaling_fit
  bool has_entropy = false;
};

int target_parity_for(int boundary_sign) {
  return boundary_sign == -1 ? +1 : -1;
}

std::string fmt(const Real& v, long dps) { return v.str(dps + 8); }

// All requested observables for one sweep point at one precision.
PointData compute_point(const ExperimentConfig& cfg, const ResolvedPoint& pt,
                        long dps) {
  PointData out;
  out.point = pt;
  out.dps_used = dps;
  PrecisionContext ctx(dps);

  bool needs_state = false;
  bool needs_k = false;
  for (const ObservableRequest& o : cfg.observables) {
    if (o.name != "c_eff" && o.name != "scaling_fit") needs_state = true;
    if (o.name == "k_matrix" || o.name == "nn_profile" ||
        o.name == "symmetric_hopping")
      needs_k = true;
  }

  CovarianceMatrix cov_a;
  SkewMatrix w;
  if (needs_state) {
    ChainSpec chain = build_chain(pt.n, pt.defects, cfg.boundary_sign);
    SkewMatrix s = majorana_hamiltonian(chain, ctx);
    CovarianceMatrix cov =
        ground_state_covariance(s, ctx, target_parity_for(cfg.boundary_sign));
    cov_a = restrict_subsystem(cov, pt.subsystem, pt.n);
  }
  if (needs_k) w = entanglement_hamiltonian(cov_a, ctx);

  for (const ObservableRequest& o : cfg.observables) {
    Clock::time_point t0 = Clock::now();
    std::vector<Row> rows;
    if (o.name == "entropy") {
      Real s = entropy(cov_a, ctx);
      rows.push_back(Row{"entropy", "", "", fmt(s, dps), 0});
      out.entropy_value = s;
      out.has_entropy = true;
    } else if (o.name == "spectrum") {
      int count = std::stoi(o.params.at("count"));
      SpectrumResult sp = single_particle_spectrum(cov_a, ctx);
      std::vector<Real> finite;
      for (const Real& e : sp.eps)
        if (!e.is_inf()) finite.push_back(e);
      std::vector<Real> levels = many_body_spectrum(finite, count);
      for (size_t k = 0; k < levels.size(); ++k)
        rows.push_back(Row{"spectrum", std::to_string(k), "",
                           fmt(levels[k], dps), 0});
    } else if (o.name == "negativity") {
      const std::string& cut_s = o.params.at("cut");
      BipartitionSpec cut;
      cut.cut_sites =
          (cut_s == "half") ? pt.subsystem.length / 2 : std::stoi(cut_s);
      NegativityResult e = log_negativity(cov_a, cut, ctx);
      rows.push_back(Row{"negativity", std::to_string(cut.cut_sites), "",
                         fmt(e.value, dps), 0});
    } else if (o.name == "k_matrix") {
      for (int i = 0; i < w.dim(); ++i)
        for (int j = i + 1; j < w.dim(); ++j)
          rows.push_back(Row{"k_matrix", std::to_string(i), std::to_string(j),
                             fmt(w.at(i, j), dps), 0});
    } else if (o.name == "nn_profile") {
      CouplingProfile p = nn_profile(w);
      for (const ProfilePoint& pp : p.points) {
        std::ostringstream pos;
        pos << pp.position;
        rows.push_back(
            Row{"nn_profile", pos.str(), pp.tag, fmt(pp.value, dps), 0});
      }
    } else if (o.name == "symmetric_hopping") {
      CouplingProfile p = symmetric_hopping(w);
      for (const ProfilePoint& pp : p.points) {
        std::ostringstream pos;
        pos << pp.position;
        rows.push_back(Row{"symmetric_hopping", pos.str(), pp.tag,
                           fmt(pp.value, dps), 0});
      }
    } else if (o.name == "c_eff") {
      Real j = ctx.parse(pt.jstar);
      Real c = c_eff(j, ctx);
      rows.push_back(Row{"c_eff", "", "", fmt(c, dps), 0});
    } else if (o.name == "fidelity") {
      ExperimentConfig partner = parse_config_file(o.params.at("partner"));
      std::vector<DefectSpec> partner_defects =
          resolve_defects(partner.defects, pt.n, pt.subsystem, pt.jstar);
      ChainSpec chain2 =
          build_chain(pt.n, partner_defects, partner.boundary_sign);
      SkewMatrix s2 = majorana_hamiltonian(chain2, ctx);
      CovarianceMatrix cov2 = ground_state_covariance(
          s2, ctx, target_parity_for(partner.boundary_sign));
      CovarianceMatrix cov2_a = restrict_subsystem(cov2, pt.subsystem, pt.n);
      Real f = fidelity(cov_a, cov2_a, ctx);
      rows.push_back(Row{"fidelity", "", "", fmt(f, dps), 0});
    } else if (o.name == "scaling_fit") {
      // Assembled after the sweep; nothing per point.
      continue;
    }
    long long elapsed = ms_since(t0);
    for (Row& r : rows) {
      r.wall_ms = elapsed;
      out.rows.push_back(std::move(r));
    }
  }
  return out;
}

PointData compute_point_with_retry(const ExperimentConfig& cfg,
                                   const ResolvedPoint& pt) {
  try {
    return compute_point(cfg, pt, pt.dps);
  } catch (const PrecisionEscalationError&) {
    long dps2 = std::max<long>(pt.dps + 10, 2L * pt.n);
    try {
      PointData d = compute_point(cfg, pt, dps2);
      d.escalated = true;
      return d;
    } catch (const PrecisionEscalationError& e2) {
      PointData d;
      d.point = pt;
      d.dps_used = dps2;
      d.failed = true;
      d.escalated = true;
      d.failure = e2.what();
      return d;
    }
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    out += c;
  }
  out += "\"";
  return out;
}

std::string iso_timestamp() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  RunOutcome outcome;
  std::vector<ResolvedPoint> points;
  try {
    points = resolve_sweep(cfg);
  } catch (const ConfigError& e) {
    outcome.exit_code = 2;
    outcome.messages.push_back(e.what());
    return outcome;
  }

  // Fan out points to workers; results land in sweep order.
  unsigned max_threads = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("WORKBENCH_MAX_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) max_threads = static_cast<unsigned>(v);
  }
  if (max_threads < 1) max_threads = 1;
  max_threads = std::min<unsigned>(max_threads,
                                   static_cast<unsigned>(points.size()));

  std::vector<PointData> data(points.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= points.size()) return;
      try {
        data[i] = compute_point_with_retry(cfg, points[i]);
      } catch (const Error& e) {
        data[i].point = points[i];
        data[i].failed = true;
        data[i].failure = e.what();
      }
    }
  };
  if (max_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < max_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  std::filesystem::create_directories(cfg.output_dir);

  // Group rows by observable, keeping sweep order.
  std::map<std::string, std::vector<std::string>> files;
  const std::string header =
      "N,L,defects,jstar,observable,pos1,pos2,value,dps,wall_time_ms";
  for (const PointData& d : data) {
    std::string defects = describe_defects(d.point.defects);
    for (const Row& r : d.rows) {
      std::ostringstream line;
      line << d.point.n << ',' << d.point.subsystem.length << ','
           << csv_escape(defects) << ',' << d.point.jstar << ','
           << r.observable << ',' << r.pos1 << ',' << r.pos2 << ','
           << r.value << ',' << d.dps_used << ',' << r.wall_ms;
      files[r.observable].push_back(line.str());
    }
  }

  // Scaling fit across the sweep, from the per-point entropies.
  bool wants_fit = false;
  for (const ObservableRequest& o : cfg.observables)
    if (o.name == "scaling_fit") wants_fit = true;
  if (wants_fit) {
    std::vector<ScalingSample> samples;
    long fit_dps = cfg.dps_min;
    bool all_ok = true;
    for (const PointData& d : data) {
      if (d.failed || !d.has_entropy) {
        all_ok = false;
        continue;
      }
      samples.push_back(
          ScalingSample{d.point.n, d.point.subsystem.length, d.entropy_value});
      fit_dps = std::max(fit_dps, d.dps_used);
    }
    if (all_ok && samples.size() >= 3) {
      PrecisionContext fit_ctx(fit_dps);
      ScalingFit fit = fit_entropy_scaling(samples, fit_ctx);
      auto push = [&](const std::string& name, const Real& v) {
        std::ostringstream line;
        line << "" << ',' << "" << ',' << "" << ',' << "" << ','
             << "scaling_fit" << ',' << name << ',' << ',' << fmt(v, fit_dps)
             << ',' << fit_dps << ',' << 0;
        files["scaling_fit"].push_back(line.str());
      };
      push("slope", fit.slope);
      push("intercept", fit.intercept);
      push("residual", fit.residual);
    }
  }

  for (const auto& [obs, lines] : files) {
    std::string path = cfg.output_dir + "/" + obs + ".csv";
    std::ofstream f(path);
    f << header << "\n";
    for (const std::string& l : lines) f << l << "\n";
    outcome.messages.push_back("wrote " + path);
  }

  // Manifest.
  {
    std::ofstream m(cfg.output_dir + "/run_manifest.txt");
    m << "version: " << version_string() << "\n";
    m << "timestamp: " << iso_timestamp() << "\n";
    m << "convention: majorana index (2j, 2j+1) per site, {g_m,g_n} = 2 delta\n";
    m << "convention: fermion_boundary_sign " << cfg.boundary_sign
      << " (ground sector; -1 = even spin parity)\n";
    m << "convention: zero-mode filling parity-canonical, target parity "
      << target_parity_for(cfg.boundary_sign) << "\n";
    m << "config:\n";
    for (const std::string& l : cfg.raw_lines) m << "  | " << l << "\n";
    m << "points:\n";
    bool any_failed = false;
    for (const PointData& d : data) {
      m << "  - n=" << d.point.n << " L=" << d.point.subsystem.length
        << " jstar=" << (d.point.jstar.empty() ? "-" : d.point.jstar)
        << " defects=" << describe_defects(d.point.defects)
        << " dps=" << d.dps_used << (d.escalated ? " (escalated)" : "");
      if (d.failed) {
        m << " FAILED: " << d.failure;
        any_failed = true;
      }
      m << "\n";
    }
    m << "status: " << (any_failed ? "partial" : "complete") << "\n";
    if (any_failed) {
      outcome.exit_code = 3;
      outcome.messages.push_back("precision escalation failed; see manifest");
    }
  }
  return outcome;
}

OracleComparison oracle_compare(const ChainSpec& chain,
                                const SubsystemSpec& subsystem,
                                const PrecisionContext& ctx, int levels) {
  OracleComparison out;
  const mpfr_prec_t bits = ctx.bits();
  out.entropy_dev = Real::of(0L, bits);
  out.spectrum_dev = Real::of(0L, bits);
  out.covariance_dev = Real::of(0L, bits);

  // Gaussian side.
  SkewMatrix s = majorana_hamiltonian(chain, ctx);
  CovarianceMatrix cov = ground_state_covariance(
      s, ctx, chain.fermion_boundary_sign == -1 ? +1 : -1);
  CovarianceMatrix cov_a = restrict_subsystem(cov, subsystem, chain.n_sites);
  Real s_gauss = entropy(cov_a, ctx);
  SpectrumResult sp = single_particle_spectrum(cov_a, ctx);
  std::vector<Real> finite;
  for (const Real& e : sp.eps)
    if (!e.is_inf()) finite.push_back(e);
  std::vector<Real> gauss_levels = many_body_spectrum(finite, levels);

  // Spin-ED side: choose the manifold member whose covariance matches.
  GroundManifold manifold = spin_ed_ground(chain);
  out.ed_degeneracy = manifold.degeneracy();
  int best = 0;
  Real best_dev(bits);
  for (int k = 0; k < manifold.degeneracy(); ++k) {
    SkewMatrix ed_cov = covariance_of_state(manifold.states[k]);
    Real dev = Real::of(0L, bits);
    Real t(bits);
    for (int i = 0; i < ed_cov.dim(); ++i)
      for (int j = 0; j < ed_cov.dim(); ++j) {
        t.assign_sub(ed_cov.at(i, j), cov.gamma.at(i, j));
        t.abs_inplace();
        if (t > dev) dev.set(t);
      }
    if (k == 0 || dev < best_dev) {
      best = k;
      best_dev = dev;
    }
  }
  out.covariance_dev = best_dev;
  const DenseState& state = manifold.states[best];

  // Entropy of the reduced density matrix.
  std::vector<Real> weights = rdm_spectrum(state, subsystem);
  Real s_ed = Real::of(0L, bits);
  for (const Real& wgt : weights)
    if (wgt.sign() > 0) s_ed -= wgt * log(wgt);
  out.entropy_dev = abs(s_gauss - s_ed);

  // Many-body levels: E_k = ln(lambda_0^2 / lambda_k^2).
  for (size_t k = 0; k < gauss_levels.size() && k < weights.size(); ++k) {
    if (weights[k].sign() <= 0) break;
    Real ed_level = log(weights[0] / weights[k]);
    Real dev = abs(ed_level - gauss_levels[k]);
    if (dev > out.spectrum_dev) out.spectrum_dev = dev;
  }
  return out;
}

int oracle_check(const ExperimentConfig& cfg, std::ostream& report) {
  std::vector<ResolvedPoint> points = resolve_sweep(cfg);
  for (const ResolvedPoint& p : points)
    if (p.n > 12)
      throw ConfigError("n", "oracle-check requires N <= 12, got " +
                                 std::to_string(p.n));
  Real threshold = Real::pow10(-8, PrecisionContext(30).bits());
  int status = 0;
  for (const ResolvedPoint& p : points) {
    PrecisionContext ctx(std::max<long>(30, p.dps));
    ChainSpec chain = build_chain(p.n, p.defects, cfg.boundary_sign);
    OracleComparison cmp = oracle_compare(chain, p.subsystem, ctx, 10);
    bool ok = cmp.entropy_dev <= threshold && cmp.spectrum_dev <= threshold &&
              (p.n > 8 || cmp.covariance_dev <= threshold);
    report << "n=" << p.n << " jstar=" << (p.jstar.empty() ? "-" : p.jstar)
           << " defects=" << describe_defects(p.defects)
           << " ed_degeneracy=" << cmp.ed_degeneracy
           << " entropy_dev=" << cmp.entropy_dev.str(3)
           << " spectrum_dev=" << cmp.spectrum_dev.str(3);
    if (p.n <= 8) report << " covariance_dev=" << cmp.covariance_dev.str(3);
    report << (ok ? "  [ok]" : "  [FAIL]") << "\n";
    if (!ok) status = 1;
  }
  return status;
}

}  // namespace ehwb
