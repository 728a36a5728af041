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

#include "ehwb/analysis.hpp"

#include <algorithm>

#include "ehwb/linalg.hpp"

namespace ehwb {

CouplingProfile nn_profile(const SkewMatrix& w) {
  CouplingProfile out;
  out.label = "nn";
  const int dim = w.dim();
  out.points.reserve(dim - 1);
  for (int m = 0; m + 1 < dim; ++m) {
    ProfilePoint p;
    p.position = m;
    p.value = w.at(m, m + 1);
    p.tag = (m % 2 == 0) ? "field" : "hopping";
    out.points.push_back(std::move(p));
  }
  return out;
}

CouplingProfile symmetric_hopping(const SkewMatrix& w) {
  CouplingProfile out;
  out.label = "symmetric_hopping";
  const int dim = w.dim();
  const int l = dim / 2;
  if (l % 2 != 0)
    throw DomainError("symmetric_hopping: subsystem length must be even",
                      std::to_string(l / 1));
  out.points.reserve(l);
  for (int m = 1; m <= l; ++m) {
    ProfilePoint p;
    p.position = static_cast<double>(m) / l;
    p.value = w.at(l - m, l + m - 1);
    p.tag = "antidiagonal";
    out.points.push_back(std::move(p));
  }
  return out;
}

CouplingProfile profile_diff(const SkewMatrix& w1, const SkewMatrix& w2,
                             int defect_majorana_index) {
  if (w1.dim() != w2.dim())
    throw DomainError("profile_diff: dimension mismatch",
                      std::to_string(w2.dim()));
  CouplingProfile out;
  out.label = "nn_diff";
  const int dim = w1.dim();
  out.points.reserve(dim - 1);
  for (int m = 0; m + 1 < dim; ++m) {
    ProfilePoint p;
    p.position = (m - defect_majorana_index) / 2.0;  // site units
    p.value = w1.at(m, m + 1) - w2.at(m, m + 1);
    p.tag = (m % 2 == 0) ? "field" : "hopping";
    out.points.push_back(std::move(p));
  }
  return out;
}

Real c_eff(const Real& j_star, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Real one = Real::one(bits);
  Real two = Real::of(2L, bits);
  Real three = Real::of(3L, bits);

  // s = |sin(2 arccot J*)| = |2 J* / (1 + J*^2)|
  Real s = abs(two * j_star / (one + j_star * j_star));

  Real pi = Real::pi(bits);
  Real acc = s / three - one / three;

  Real bracket = Real::of(0L, bits);
  Real small = Real::pow10(-(ctx.digits() / 2), bits);
  if (s > small) {
    // (s+1) ln(s+1) ln(s); vanishes in the s -> 0 limit.
    bracket += (s + one) * log1p(s) * log(s);
  }
  bracket += (s - one) * dilog(one - s, ctx);
  bracket += (s + one) * dilog(-s, ctx);

  acc -= three / (pi * pi) * bracket;
  return acc;
}

ScalingFit fit_entropy_scaling(const std::vector<ScalingSample>& samples,
                               const PrecisionContext& ctx) {
  if (samples.size() < 3)
    throw DomainError("fit_entropy_scaling: need at least 3 samples",
                      std::to_string(samples.size()));
  const mpfr_prec_t bits = ctx.bits();
  Real pi = Real::pi(bits);

  struct Row {
    Real x, y;
  };
  std::vector<Row> rows;
  rows.reserve(samples.size());
  for (const ScalingSample& s : samples) {
    if (s.subsystem_length < 1 || s.subsystem_length >= s.n_sites)
      throw DomainError("fit_entropy_scaling: invalid subsystem length",
                        std::to_string(s.subsystem_length));
    Real n = ctx.make_int(s.n_sites);
    Real l = ctx.make_int(s.subsystem_length);
    Real x = log(n / pi * sin(pi * l / n));
    rows.push_back(Row{std::move(x), s.entropy});
  }
  // Deterministic order regardless of the caller's ordering.
  std::sort(rows.begin(), rows.end(),
            [](const Row& a, const Row& b) { return a.x < b.x; });
  Real sep = Real::pow10(-(ctx.digits() / 2), bits);
  for (size_t i = 1; i < rows.size(); ++i) {
    Real d = rows[i].x - rows[i - 1].x;
    d.abs_inplace();
    if (d < sep)
      throw DomainError("fit_entropy_scaling: degenerate abscissae",
                        rows[i].x.str(8));
  }

  const long m = static_cast<long>(rows.size());
  Real sx = Real::of(0L, bits), sy = Real::of(0L, bits),
       sxx = Real::of(0L, bits), sxy = Real::of(0L, bits);
  for (const Row& r : rows) {
    sx += r.x;
    sy += r.y;
    sxx.addmul(r.x, r.x);
    sxy.addmul(r.x, r.y);
  }
  Real count = ctx.make_int(m);
  Real denom = count * sxx - sx * sx;
  ScalingFit fit;
  fit.slope = (count * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / count;
  fit.residual = Real::of(0L, bits);
  for (const Row& r : rows) {
    Real dev = r.y - (fit.intercept + fit.slope * r.x);
    dev.abs_inplace();
    if (dev > fit.residual) fit.residual.set(dev);
  }
  return fit;
}

}  // namespace ehwb
