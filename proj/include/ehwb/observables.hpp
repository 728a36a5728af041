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

#ifndef EHWB_OBSERVABLES_HPP_
#define EHWB_OBSERVABLES_HPP_

#include "ehwb/gaussian.hpp"
#include "ehwb/precision.hpp"

namespace ehwb {

// Von Neumann entropy in nats: sum_k h((1+nu_k)/2).
Real entropy(const CovarianceMatrix& gamma_a, const PrecisionContext& ctx);

// Renyi entropy S_alpha = sum_k ln(p^alpha + (1-p)^alpha)/(1-alpha).
// alpha > 0 and alpha != 1.
Real renyi_entropy(const CovarianceMatrix& gamma_a, const Real& alpha,
                   const PrecisionContext& ctx);

// Splits the subsystem's 2L Majorana indices into [0, 2*cut_sites) and
// [2*cut_sites, 2L).
struct BipartitionSpec {
  int cut_sites = 0;
};

struct NegativityResult {
  Real value;  // max(raw, 0)
  Real raw;
};

// Fermionic logarithmic negativity ln Tr|rho^{T~_L}| across the cut, from
// the partially time-reversed covariance pair Gamma_±.
NegativityResult log_negativity(const CovarianceMatrix& gamma_a,
                                const BipartitionSpec& cut,
                                const PrecisionContext& ctx);

// Uhlmann fidelity of two Gaussian states from their covariances
// (correlation-matrix form of the determinant formula; G_i := i Gamma_i).
// Near-pure modes are regularized by pulling |nu| to 1 - 10^-(digits-8).
Real fidelity(const CovarianceMatrix& gamma_1, const CovarianceMatrix& gamma_2,
              const PrecisionContext& ctx);

}  // namespace ehwb

#endif  // EHWB_OBSERVABLES_HPP_
