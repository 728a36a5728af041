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

#include "ehwb/chain.hpp"

#include <algorithm>
#include <set>

namespace ehwb {

void ChainSpec::validate() const {
  if (n_sites < 2 || n_sites % 2 != 0)
    throw DomainError("chain: n_sites must be even and positive",
                      std::to_string(n_sites));
  if (static_cast<int>(bond_couplings.size()) != n_sites)
    throw DomainError("chain: bond_couplings length must equal n_sites",
                      std::to_string(bond_couplings.size()));
  if (static_cast<int>(site_fields.size()) != n_sites)
    throw DomainError("chain: site_fields length must equal n_sites",
                      std::to_string(site_fields.size()));
  for (int b : duality_bonds)
    if (b < 0 || b >= n_sites)
      throw DomainError("chain: duality bond out of range", std::to_string(b));
  if (fermion_boundary_sign != 1 && fermion_boundary_sign != -1)
    throw DomainError("chain: fermion_boundary_sign must be +-1",
                      std::to_string(fermion_boundary_sign));
  // Coupling strings must parse.
  for (const auto& v : bond_couplings) Real::parse(v, 64);
  for (const auto& v : site_fields) Real::parse(v, 64);
}

std::vector<int> SubsystemSpec::majorana_indices(int n_sites) const {
  if (length < 1 || length >= n_sites)
    throw DomainError("subsystem: need 1 <= length < n_sites",
                      std::to_string(length));
  if (start < 0 || start >= n_sites)
    throw DomainError("subsystem: start out of range", std::to_string(start));
  std::vector<int> idx;
  idx.reserve(2 * length);
  for (int m = 0; m < 2 * length; ++m)
    idx.push_back((2 * start + m) % (2 * n_sites));
  return idx;
}

ChainSpec build_chain(int n_sites, const std::vector<DefectSpec>& defects,
                      int boundary_sign) {
  if (n_sites < 8 || n_sites % 2 != 0)
    throw DomainError("build_chain: n_sites must be even and >= 8",
                      std::to_string(n_sites));
  std::set<int> seen;
  ChainSpec spec;
  spec.n_sites = n_sites;
  spec.bond_couplings.assign(n_sites, "1");
  spec.site_fields.assign(n_sites, "1");
  spec.fermion_boundary_sign = boundary_sign;
  for (const DefectSpec& d : defects) {
    if (d.bond < 0 || d.bond >= n_sites)
      throw DomainError("build_chain: defect bond out of range",
                        std::to_string(d.bond));
    if (!seen.insert(d.bond).second)
      throw DomainError("build_chain: duplicate defect bond",
                        std::to_string(d.bond));
    switch (d.kind) {
      case DefectKind::kEnergy:
        Real::parse(d.strength, 64);
        spec.bond_couplings[d.bond] = d.strength;
        break;
      case DefectKind::kAntiperiodic:
        spec.bond_couplings[d.bond] = "-1";
        break;
      case DefectKind::kDuality:
        spec.duality_bonds.insert(d.bond);
        break;
    }
  }
  spec.validate();
  return spec;
}

int centered_defect_bond(const SubsystemSpec& subsystem) {
  if (subsystem.length % 2 != 0)
    throw DomainError("centered_defect_bond: subsystem length must be even",
                      std::to_string(subsystem.length));
  return subsystem.start + subsystem.length / 2 - 1;
}

int antipodal_bond(int bond, int n_sites) {
  return (bond + n_sites / 2) % n_sites;
}

int boundary_bond(const SubsystemSpec& subsystem, int n_sites) {
  return (subsystem.start - 1 + n_sites) % n_sites;
}

SkewMatrix majorana_hamiltonian(const ChainSpec& spec,
                                const PrecisionContext& ctx) {
  spec.validate();
  const int n = spec.n_sites;
  const int dim = 2 * n;
  SkewMatrix s(dim, ctx.bits());
  Real half = Real::of(0.5, ctx.bits());

  for (int j = 0; j < n; ++j) {
    Real g = ctx.parse(spec.site_fields[j]);
    g.mul(half);
    s.set(2 * j, 2 * j + 1, g);

    const bool ring = (j == n - 1);
    Real sign = ctx.make_int(ring ? spec.fermion_boundary_sign : 1);
    if (spec.duality_bonds.count(j)) {
      // Skips Majorana 2j+2; fixed unit coupling.
      Real b = half * sign;
      s.set(2 * j + 1, (2 * j + 3) % dim, b);
    } else {
      Real coupling = ctx.parse(spec.bond_couplings[j]);
      coupling.mul(half);
      coupling.mul(sign);
      s.set(2 * j + 1, (2 * j + 2) % dim, coupling);
    }
  }
  return s;
}

}  // namespace ehwb
