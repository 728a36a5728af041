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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ehwb/ed.hpp"
#include "ehwb/gaussian.hpp"
#include "ehwb/observables.hpp"
#include "ehwb/runner.hpp"
#include "test_support.hpp"

using namespace ehwb;
using namespace ehwb_test;

namespace {

ChainSpec small_uniform(int n) {
  ChainSpec c;
  c.n_sites = n;
  c.bond_couplings.assign(n, "1");
  c.site_fields.assign(n, "1");
  return c;
}

}  // namespace

TEST_CASE("spin ED ground energy at N=2 is -sqrt(2)") {
  ChainSpec c = small_uniform(2);
  GroundManifold m = spin_ed_ground(c);
  CHECK(m.degeneracy() == 1);
  Real expect = -sqrt(Real::of(2L, ed_context().bits()));
  CHECK(near(m.energy, expect, Real::pow10(-20, ed_context().bits())));
  CHECK(m.parities[0] == 1);  // even sector
}

TEST_CASE("spin ED residual quality at N=8") {
  ChainSpec c = build_chain(8, {DefectSpec::energy(3, "0.2")});
  GroundManifold m = spin_ed_ground(c);
  CHECK(m.degeneracy() == 1);
  // Gaussian ground energy in the matching sector agrees:
  // E0 = -sum eps_k of the Schur blocks.
  PrecisionContext ctx(40);
  SkewMatrix s = majorana_hamiltonian(c, ctx);
  SchurForm f = skew_schur(s, ctx);
  Real e0 = ctx.make(0.0);
  for (const Real& eps : f.block_values) e0 -= eps;
  CHECK(near(m.energy, e0, Real::pow10(-15, ctx.bits())));
}

TEST_CASE("antiperiodic defect makes the spin ground state degenerate") {
  ChainSpec c = build_chain(8, {DefectSpec::antiperiodic(1)});
  GroundManifold m = spin_ed_ground(c);
  CHECK(m.degeneracy() == 2);
  // One state per parity sector.
  CHECK(m.parities[0] + m.parities[1] == 0);
}

TEST_CASE("fermion ED of a single mode") {
  const PrecisionContext& ctx = ed_context();
  SkewMatrix s(2, ctx.bits());
  s.set(0, 1, Real::of(-1L, ctx.bits()));
  GroundManifold m = fermion_ed_ground(s);
  CHECK(m.degeneracy() == 1);
  SkewMatrix cov = covariance_of_state(m.states[0]);
  CHECK(near(cov.at(0, 1), -1.0, 1e-20));
}

TEST_CASE("fermion ED covariance agrees with gaussian-core at N=4") {
  PrecisionContext ctx(40);
  ChainSpec c = small_uniform(4);
  SkewMatrix s = majorana_hamiltonian(c, ctx);
  CovarianceMatrix cov = ground_state_covariance(s, ctx);
  GroundManifold m = fermion_ed_ground(s);
  Real best(ctx.bits());
  for (int k = 0; k < m.degeneracy(); ++k) {
    Real dev =
        max_diff(covariance_of_state(m.states[k]).dense(), cov.gamma.dense());
    if (k == 0 || dev < best) best = dev;
  }
  CHECK(best <= Real::pow10(-10, ctx.bits()));
}

TEST_CASE("fermion ED sees the duality zero mode") {
  PrecisionContext ctx(40);
  ChainSpec c = small_uniform(4);
  c.duality_bonds.insert(1);
  SkewMatrix s = majorana_hamiltonian(c, ctx);
  GroundManifold m = fermion_ed_ground(s);
  CHECK(m.degeneracy() == 2);
  CovarianceMatrix cov = ground_state_covariance(s, ctx, +1);
  CHECK(cov.purity_defect <= ctx.purity_tol());
  // The parity-matched ED state has the same covariance.
  Real best(ctx.bits());
  bool first = true;
  for (int k = 0; k < m.degeneracy(); ++k) {
    if (m.parities[k] != +1) continue;
    Real dev =
        max_diff(covariance_of_state(m.states[k]).dense(), cov.gamma.dense());
    if (first || dev < best) best = dev;
    first = false;
  }
  REQUIRE(!first);
  CHECK(best <= Real::pow10(-10, ctx.bits()));
}

TEST_CASE("rdm spectrum of product and Bell states") {
  const PrecisionContext& ctx = ed_context();
  DenseState product;
  product.n_sites = 2;
  product.amplitudes.assign(4, Complex::zero(ctx.bits()));
  product.amplitudes[2].re.set_si(1);  // |site1 = 1, site0 = 0>
  std::vector<Real> w = rdm_spectrum(product, SubsystemSpec{0, 1});
  CHECK(near(w[0], 1.0, 1e-30));
  CHECK(near(w[1], 0.0, 1e-30));

  DenseState bell;
  bell.n_sites = 2;
  bell.amplitudes.assign(4, Complex::zero(ctx.bits()));
  Real inv_sqrt2 = Real::one(ctx.bits()) / sqrt(Real::of(2L, ctx.bits()));
  bell.amplitudes[0].re.set(inv_sqrt2);
  bell.amplitudes[3].re.set(inv_sqrt2);
  w = rdm_spectrum(bell, SubsystemSpec{1, 1});
  CHECK(near(w[0], 0.5, 1e-30));
  CHECK(near(w[1], 0.5, 1e-30));
  Real total = w[0] + w[1];
  CHECK(near(total, 1.0, 1e-40));
}

TEST_CASE("gaussian pipeline matches spin ED across defect families at N=8") {
  PrecisionContext ctx(40);
  SubsystemSpec half{0, 4};
  std::vector<std::vector<DefectSpec>> families = {
      {},
      {DefectSpec::energy(centered_defect_bond(half), "0.2")},
      {DefectSpec::antiperiodic(centered_defect_bond(half))},
      {DefectSpec::duality(centered_defect_bond(half))},
      {DefectSpec::energy(7, "0.2")},  // boundary bond entering A
  };
  Real tol = Real::pow10(-8, ctx.bits());
  for (const auto& defects : families) {
    ChainSpec chain = build_chain(8, defects);
    OracleComparison cmp = oracle_compare(chain, half, ctx, 10);
    CHECK(cmp.entropy_dev <= tol);
    CHECK(cmp.spectrum_dev <= tol);
    CHECK(cmp.covariance_dev <= tol);
  }
}

TEST_CASE("dense negativity of a product state is zero") {
  const PrecisionContext& ctx = ed_context();
  // rho = |00><00| on 2 modes.
  ComplexMatrix rho(4, 4, ctx.bits());
  rho(0, 0).re.set_si(1);
  Real e = dense_negativity(rho, 2, 1);
  CHECK(abs(e) <= Real::pow10(-30, ctx.bits()));
}

TEST_CASE("dense negativity rejects oversized systems") {
  const PrecisionContext& ctx = ed_context();
  ComplexMatrix rho(128, 128, ctx.bits());
  CHECK_THROWS_AS(dense_negativity(rho, 7, 2), DomainError);
}

TEST_CASE("dense fidelity of identical and orthogonal states") {
  const PrecisionContext& ctx = ed_context();
  ComplexMatrix rho(2, 2, ctx.bits());
  rho(0, 0).re.set_d(0.3);
  rho(1, 1).re.set_d(0.7);
  Real f = dense_fidelity(rho, rho);
  CHECK(near(f, 1.0, 1e-30));

  ComplexMatrix a(2, 2, ctx.bits()), b(2, 2, ctx.bits());
  a(0, 0).re.set_si(1);
  b(1, 1).re.set_si(1);
  CHECK(abs(dense_fidelity(a, b)) <= Real::pow10(-20, ctx.bits()));
}
