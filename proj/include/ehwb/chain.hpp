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

#ifndef EHWB_CHAIN_HPP_
#define EHWB_CHAIN_HPP_

#include <set>
#include <string>
#include <vector>

#include "ehwb/matrix.hpp"
#include "ehwb/precision.hpp"

namespace ehwb {

enum class DefectKind { kEnergy, kAntiperiodic, kDuality };

// One bond defect. Couplings are carried as decimal strings so configs
// reproduce bit-exactly at any working precision.
struct DefectSpec {
  DefectKind kind = DefectKind::kEnergy;
  int bond = 0;
  std::string strength = "1";  // energy only; antiperiodic is exactly -1

  static DefectSpec energy(int bond, const std::string& strength) {
    return DefectSpec{DefectKind::kEnergy, bond, strength};
  }
  static DefectSpec antiperiodic(int bond) {
    return DefectSpec{DefectKind::kAntiperiodic, bond, "-1"};
  }
  static DefectSpec duality(int bond) {
    return DefectSpec{DefectKind::kDuality, bond, "1"};
  }
};

// Ring of N spins: bond i couples sites i and i+1 mod N. Bonds listed in
// duality_bonds are replaced by the Majorana-skipping coupling and their
// J value is ignored.
struct ChainSpec {
  int n_sites = 0;
  std::vector<std::string> bond_couplings;  // J_0 .. J_{N-1}
  std::vector<std::string> site_fields;     // g_0 .. g_{N-1}
  std::set<int> duality_bonds;
  int fermion_boundary_sign = -1;  // -1: antiperiodic fermion ring

  void validate() const;
};

// Contiguous block of `length` sites starting at site `start`; Majorana
// indices {2*start, ..., 2*(start+length)-1} mod 2N.
struct SubsystemSpec {
  int start = 0;
  int length = 0;

  std::vector<int> majorana_indices(int n_sites) const;
  SubsystemSpec complement(int n_sites) const {
    return SubsystemSpec{(start + length) % n_sites, n_sites - length};
  }
};

// Uniform critical chain (J = g = 1) with the given defects applied.
// Bond indices must be distinct and in range; N even and >= 8.
ChainSpec build_chain(int n_sites, const std::vector<DefectSpec>& defects,
                      int boundary_sign = -1);

// Bond between the two middle sites of the subsystem: start + length/2 - 1.
int centered_defect_bond(const SubsystemSpec& subsystem);

// Placement conventions used throughout the experiments.
int antipodal_bond(int bond, int n_sites);
// Bond entering the subsystem from the left: start - 1 mod N.
int boundary_bond(const SubsystemSpec& subsystem, int n_sites);

// Single-particle kernel S (real skew, dim 2N) with H = iS:
//   field g_j    -> S(2j, 2j+1)   = g_j/2
//   bond J_j     -> S(2j+1, 2j+2) = J_j/2
//   duality bond -> S(2j+1, 2j+3) = 1/2, Majorana 2j+2 decoupled
// The bond closing the ring carries fermion_boundary_sign. The 1/2 scale
// makes the single-particle levels match the spin chain
// H = -(1/2) sum (J sx sx + g sz), which the ED oracle pins down.
SkewMatrix majorana_hamiltonian(const ChainSpec& spec,
                                const PrecisionContext& ctx);

}  // namespace ehwb

#endif  // EHWB_CHAIN_HPP_
