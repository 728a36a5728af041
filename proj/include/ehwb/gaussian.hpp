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

#ifndef EHWB_GAUSSIAN_HPP_
#define EHWB_GAUSSIAN_HPP_

#include <vector>

#include "ehwb/chain.hpp"
#include "ehwb/linalg.hpp"
#include "ehwb/matrix.hpp"
#include "ehwb/precision.hpp"

namespace ehwb {

// Majorana covariance matrix: <gamma_m gamma_n> = delta_mn + i Gamma_mn.
// purity_defect caches ||Gamma^2 + 1||_max (zero for pure states).
struct CovarianceMatrix {
  SkewMatrix gamma;
  Real purity_defect;

  int dim() const { return gamma.dim(); }
};

CovarianceMatrix make_covariance(SkewMatrix gamma);

// Ground state of H = i/2 sum S_mn gamma_m gamma_n: i*Gamma = sign(iS),
// computed by the Newton iteration on the nonsingular part. Exact zero
// modes (eps < 10^-(digits/2)) are deflated and filled as pure pairs in
// the canonical null-space basis; the pairing orientation is then chosen
// so the state's fermion parity (the Pfaffian sign of Gamma) equals
// target_parity. +1 matches the even spin-parity sector selected by
// fermion_boundary_sign = -1.
CovarianceMatrix ground_state_covariance(const SkewMatrix& s,
                                         const PrecisionContext& ctx,
                                         int target_parity = +1);

// Principal submatrix on the subsystem's Majorana indices (mod 2N).
CovarianceMatrix restrict_subsystem(const CovarianceMatrix& full,
                                    const SubsystemSpec& subsystem,
                                    int n_sites);

// W with K = iW: W = Im K, the plotted quantity. Spectrally,
// W = f(i Gamma_A) pulled back to a real skew matrix, f = log((1+x)/(1-x)).
// Throws PrecisionEscalationError when some |nu| >= 1 - 10^-(digits-8).
SkewMatrix entanglement_hamiltonian(const CovarianceMatrix& gamma_a,
                                    const PrecisionContext& ctx);

// Validation route: K = -log[2 (1 + i Gamma_A)^{-1} - 1] evaluated exactly
// as written, through the explicit inverse. Kept as a cross-check of the
// spectral route; tests assert both agree.
SkewMatrix entanglement_hamiltonian_via_inverse(const CovarianceMatrix& gamma_a,
                                                const PrecisionContext& ctx);

struct SpectrumResult {
  std::vector<Real> nu;   // pair magnitudes, descending, clamped to [0,1]
  std::vector<Real> eps;  // log((1+nu)/(1-nu)); +inf sentinel when nu == 1
  Real max_clamp;         // largest clamp distance applied to any nu
};

SpectrumResult single_particle_spectrum(const CovarianceMatrix& gamma_a,
                                        const PrecisionContext& ctx);

// The `count` smallest subset sums of eps (with multiplicity), ascending.
// Best-first expansion; never materializes the full 2^L set. eps entries
// must be finite and non-negative.
std::vector<Real> many_body_spectrum(const std::vector<Real>& eps, int count);

// Fermion parity of a pure Gaussian state: sign of Pf(Gamma).
int state_parity(const CovarianceMatrix& gamma, const PrecisionContext& ctx);

}  // namespace ehwb

#endif  // EHWB_GAUSSIAN_HPP_
