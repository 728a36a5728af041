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

#ifndef EHWB_ANALYSIS_HPP_
#define EHWB_ANALYSIS_HPP_

#include <string>
#include <vector>

#include "ehwb/matrix.hpp"
#include "ehwb/precision.hpp"

namespace ehwb {

struct ProfilePoint {
  double position;  // index, site distance, or x = m/L depending on profile
  Real value;       // signed entry of W
  std::string tag;  // "field" / "hopping" for nearest-neighbor points
};

struct CouplingProfile {
  std::string label;
  std::vector<ProfilePoint> points;  // sorted by position
};

// Nearest-neighbor couplings W_{m,m+1}, m = 0..2L-2. Even m are field-type
// bonds, odd m hopping-type.
CouplingProfile nn_profile(const SkewMatrix& w);

// Anti-diagonal (symmetric hopping) couplings: pairs (L-m, L+m-1) in
// 0-based Majorana indices, m = 1..L, positions x = m/L. Values are
// signed; the plotted magnitude carries an alternating sign.
CouplingProfile symmetric_hopping(const SkewMatrix& w);

// Nearest-neighbor profile of (W1 - W2) with positions recentered on a
// defect: position = (m - defect_majorana_index)/2 in site units.
CouplingProfile profile_diff(const SkewMatrix& w1, const SkewMatrix& w2,
                             int defect_majorana_index);

// Effective central charge of a boundary defect of strength J*:
//   s = |2 J* / (1 + J*^2)|  (= |sin(2 arccot J*)|)
//   c_eff = s/3 - 1/3 - (3/pi^2) [ (s+1) ln(s+1) ln(s)
//             + (s-1) Li2(1-s) + (s+1) Li2(-s) ]
// The (s+1)ln(s+1)ln(s) term is evaluated as its limit 0 for s below
// 10^-(digits/2).
Real c_eff(const Real& j_star, const PrecisionContext& ctx);

struct ScalingSample {
  int n_sites;
  int subsystem_length;
  Real entropy;
};

struct ScalingFit {
  Real slope;
  Real intercept;
  Real residual;  // max |S_i - (intercept + slope x_i)|
};

// Ordinary least squares of S against x = ln[(N/pi) sin(pi L / N)].
// Needs >= 3 samples with distinct abscissae. Samples are sorted
// internally, so the fit is invariant under reordering.
ScalingFit fit_entropy_scaling(const std::vector<ScalingSample>& samples,
                               const PrecisionContext& ctx);

}  // namespace ehwb

#endif  // EHWB_ANALYSIS_HPP_
