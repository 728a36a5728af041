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
//
// Brute-force Fock/spin-space diagonalization for small chains. Ground
// truth for the Gaussian pipeline; everything here runs at a fixed 50
// decimal digits so precision never confounds an oracle comparison.

#ifndef EHWB_ED_HPP_
#define EHWB_ED_HPP_

#include <vector>

#include "ehwb/chain.hpp"
#include "ehwb/matrix.hpp"
#include "ehwb/precision.hpp"

namespace ehwb {

constexpr long kEdDigits = 50;
const PrecisionContext& ed_context();

// State vector over the 2^N occupation / spin-z product basis.
// Bit j of the basis index is site j (site 0 = least significant bit);
// bit 0 means spin up (sigma_z = +1) / empty mode.
struct DenseState {
  int n_sites = 0;
  std::vector<Complex> amplitudes;
};

struct GroundManifold {
  Real energy;
  std::vector<DenseState> states;  // orthonormal, parity-definite
  std::vector<int> parities;      // +-1 per state
  int degeneracy() const { return static_cast<int>(states.size()); }
};

// Ground state (or full degenerate ground basis) of
// H = -(1/2) sum_j (J_j sx_j sx_{j+1} + g_j sz_j) - (1/2) sum_duality sx_j sy_{j+1}
// by Lanczos with full reorthogonalization and deflation. N <= 14.
GroundManifold spin_ed_ground(const ChainSpec& spec);

// Ground manifold of the quadratic Majorana Hamiltonian
// H = sum_{m<n} i S_mn gamma_m gamma_n in the 2^N Fock space, 2N = dim S <= 16.
GroundManifold fermion_ed_ground(const SkewMatrix& s);

// Schmidt weights lambda_i^2 (eigenvalues of the reduced density matrix),
// descending, summing to 1. The region may wrap around the ring.
std::vector<Real> rdm_spectrum(const DenseState& state,
                               const SubsystemSpec& region);

// Majorana covariance <gamma_m gamma_n> = delta + i Gamma of a dense state.
SkewMatrix covariance_of_state(const DenseState& state);

int parity_of_state(const DenseState& state);

// ---- dense oracle machinery -------------------------------------------------

// 2^n x 2^n matrix of gamma_m (Jordan-Wigner string convention above).
ComplexMatrix dense_majorana(int n_modes, int m);

// Dense matrix of H = sum_{m<n} i S_mn gamma_m gamma_n.
ComplexMatrix dense_quadratic_operator(const SkewMatrix& s);

// Covariance read off a density matrix: Gamma_mn = Im Tr(rho gamma_m gamma_n).
SkewMatrix covariance_of_density(const ComplexMatrix& rho, int n_modes);

// ln Tr |rho^{T~}| with the fermionic partial time reversal applied to
// modes [0, cut_modes): every Majorana monomial picks up i^(number of
// left-region factors). Literal construction over the 4^n monomial basis;
// n_modes <= 6.
Real dense_negativity(const ComplexMatrix& rho, int n_modes, int cut_modes);

// Uhlmann fidelity Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)) of two density
// matrices, by dense diagonalization.
Real dense_fidelity(const ComplexMatrix& rho1, const ComplexMatrix& rho2);

}  // namespace ehwb

#endif  // EHWB_ED_HPP_
