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

#include "ehwb/chain.hpp"
#include "ehwb/ed.hpp"
#include "ehwb/gaussian.hpp"
#include "ehwb/linalg.hpp"
#include "test_support.hpp"

using namespace ehwb;
using namespace ehwb_test;

namespace {

CovarianceMatrix uniform_ground(int n, const PrecisionContext& ctx) {
  return ground_state_covariance(
      majorana_hamiltonian(build_chain(n, {}), ctx), ctx);
}

// W pulled back to a covariance through nu = tanh(eps/2).
SkewMatrix tanh_pullback(const SkewMatrix& w, const PrecisionContext& ctx) {
  RealMatrix zero(w.dim(), w.dim(), ctx.bits());
  ComplexMatrix iw = ComplexMatrix::from_parts(nullptr, &w.dense(), ctx.bits());
  ComplexMatrix g = matrix_function(
      iw,
      [&](const Real& x) {
        Real half = Real::of(0.5, ctx.bits());
        Real e = exp(x * half), em = exp(-(x * half));
        return (e - em) / (e + em);
      },
      ctx);
  return SkewMatrix::from_dense(g.imag_part());
}

}  // namespace

TEST_CASE("single mode ground covariance") {
  PrecisionContext ctx(30);
  SkewMatrix s(2, ctx.bits());
  s.set(0, 1, Real::of(-2.5, ctx.bits()));  // g > 0 in the spec's layout
  CovarianceMatrix cov = ground_state_covariance(s, ctx);
  CHECK(near(cov.gamma.at(0, 1), -1.0, 1e-25));
  CHECK(cov.purity_defect <= ctx.purity_tol());
}

TEST_CASE("ground covariance matches fock-space ED at N=4") {
  PrecisionContext ctx(40);
  ChainSpec c = build_chain(8, {});
  c.n_sites = 4;
  c.bond_couplings.resize(4);
  c.site_fields.resize(4);
  SkewMatrix s = majorana_hamiltonian(c, ctx);
  CovarianceMatrix cov = ground_state_covariance(s, ctx);
  CHECK(cov.purity_defect <= ctx.purity_tol());

  GroundManifold manifold = fermion_ed_ground(s);
  REQUIRE(manifold.degeneracy() >= 1);
  Real best(ctx.bits());
  for (int k = 0; k < manifold.degeneracy(); ++k) {
    SkewMatrix ed_cov = covariance_of_state(manifold.states[k]);
    Real dev = max_diff(ed_cov.dense(), cov.gamma.dense());
    if (k == 0 || dev < best) best = dev;
  }
  CHECK(best <= Real::pow10(-10, ctx.bits()));
}

TEST_CASE("newton and schur covariance routes agree on a defected chain") {
  PrecisionContext ctx(40);
  ChainSpec c = build_chain(12, {DefectSpec::energy(2, "0.2")});
  SkewMatrix s = majorana_hamiltonian(c, ctx);
  // Fast production route.
  CovarianceMatrix fast = ground_state_covariance(s, ctx);
  // Literal Schur route.
  SchurForm f = skew_schur(s, ctx);
  RealMatrix gb(s.dim(), s.dim(), ctx.bits());
  for (int k = 0; k < s.dim() / 2; ++k) {
    gb(2 * k, 2 * k + 1).set_si(-1);
    gb(2 * k + 1, 2 * k).set_si(1);
  }
  RealMatrix gamma_schur = mul(f.rotation, mul(gb, f.rotation.transposed()));
  CHECK(max_diff(fast.gamma.dense(), gamma_schur) <= ctx.convergence_tol());
}

TEST_CASE("zero-mode chains still produce pure states with target parity") {
  PrecisionContext ctx(40);
  for (auto defect :
       {DefectSpec::antiperiodic(3), DefectSpec::duality(3)}) {
    ChainSpec c = build_chain(8, {defect});
    SkewMatrix s = majorana_hamiltonian(c, ctx);
    CovarianceMatrix cov = ground_state_covariance(s, ctx, +1);
    CHECK(cov.purity_defect <= ctx.purity_tol());
    CHECK(state_parity(cov, ctx) == +1);
    CovarianceMatrix odd = ground_state_covariance(s, ctx, -1);
    CHECK(odd.purity_defect <= ctx.purity_tol());
    CHECK(state_parity(odd, ctx) == -1);
  }
}

TEST_CASE("restrict to the full system is the identity") {
  PrecisionContext ctx(35);
  CovarianceMatrix cov = uniform_ground(8, ctx);
  CovarianceMatrix again = restrict_subsystem(cov, SubsystemSpec{0, 8}, 8);
  // length < n_sites is required; full system restriction is via length = N.
  CHECK(max_diff(again.gamma.dense(), cov.gamma.dense()).is_zero());
}

TEST_CASE("single-site restriction matches the ED reduced state") {
  PrecisionContext ctx(40);
  ChainSpec c = build_chain(8, {});
  SkewMatrix s = majorana_hamiltonian(c, ctx);
  CovarianceMatrix cov = ground_state_covariance(s, ctx);
  CovarianceMatrix site = restrict_subsystem(cov, SubsystemSpec{2, 1}, 8);
  REQUIRE(site.dim() == 2);
  Real nu = site.gamma.at(0, 1);
  // 2x2 block [[0, nu'],[-nu', 0]] with 0 < |nu'| < 1.
  Real a = abs(nu);
  CHECK(a > Real::zero(ctx.bits()));
  CHECK(a < Real::one(ctx.bits()));
  // Against the spin ED single-site reduced state.
  GroundManifold m = spin_ed_ground(c);
  SkewMatrix ed_cov = covariance_of_state(m.states[0]);
  CHECK(near(nu, ed_cov.at(4, 5), Real::pow10(-10, ctx.bits())));
}

TEST_CASE("restrict supports wraparound subsystems") {
  PrecisionContext ctx(35);
  CovarianceMatrix cov = uniform_ground(8, ctx);
  CovarianceMatrix wrap = restrict_subsystem(cov, SubsystemSpec{7, 2}, 8);
  CHECK(wrap.dim() == 4);
  // (14,15,0,1) block: check one entry against the full matrix.
  CHECK(near(wrap.gamma.at(0, 2), cov.gamma.at(14, 0), ctx.convergence_tol()));
  // By translation invariance of the ring, the wrapped block equals the
  // block at sites {0,1}.
  CovarianceMatrix plain = restrict_subsystem(cov, SubsystemSpec{0, 2}, 8);
  CHECK(max_diff(wrap.gamma.dense(), plain.gamma.dense()) <=
        Real::pow10(-10, ctx.bits()));
}

TEST_CASE("entanglement hamiltonian of a maximally mixed mode is zero") {
  PrecisionContext ctx(30);
  SkewMatrix z(2, ctx.bits());
  CovarianceMatrix mixed = make_covariance(z);
  SkewMatrix w = entanglement_hamiltonian(mixed, ctx);
  CHECK(w.dense().max_abs().is_zero());
}

TEST_CASE("entanglement hamiltonian escalates near purity") {
  PrecisionContext ctx(30);
  SkewMatrix s(2, ctx.bits());
  s.set(0, 1, Real::one(ctx.bits()));  // nu = 1 exactly
  CovarianceMatrix pure = make_covariance(s);
  CHECK_THROWS_AS(entanglement_hamiltonian(pure, ctx),
                  PrecisionEscalationError);
}

TEST_CASE("spectral and inverse-based K routes agree") {
  PrecisionContext ctx(45);
  CovarianceMatrix cov = uniform_ground(10, ctx);
  CovarianceMatrix a = restrict_subsystem(cov, SubsystemSpec{0, 4}, 10);
  SkewMatrix w1 = entanglement_hamiltonian(a, ctx);
  SkewMatrix w2 = entanglement_hamiltonian_via_inverse(a, ctx);
  CHECK(max_diff(w1.dense(), w2.dense()) <= Real::pow10(-25, ctx.bits()));
}

TEST_CASE("eigenvalues of iW are 2 artanh(nu)") {
  PrecisionContext ctx(40);
  CovarianceMatrix cov = uniform_ground(8, ctx);
  CovarianceMatrix a = restrict_subsystem(cov, SubsystemSpec{0, 4}, 8);
  SkewMatrix w = entanglement_hamiltonian(a, ctx);
  SpectrumResult sp = single_particle_spectrum(a, ctx);
  SchurForm f = skew_schur(w, ctx);
  Real one = Real::one(ctx.bits());
  Real half = Real::of(0.5, ctx.bits());
  for (size_t k = 0; k < f.block_values.size(); ++k) {
    // artanh(nu) = log((1+nu)/(1-nu))/2, block values descending like nu.
    Real expect = log((one + sp.nu[k]) / (one - sp.nu[k]));
    CHECK(near(f.block_values[k], expect, Real::pow10(-25, ctx.bits())));
    Real nu_back = (exp(f.block_values[k]) - one) / (exp(f.block_values[k]) + one);
    CHECK(near(nu_back, sp.nu[k], Real::pow10(-25, ctx.bits())));
    (void)half;
  }
}

TEST_CASE("K pulls back to the covariance") {
  PrecisionContext ctx(40);
  CovarianceMatrix cov = uniform_ground(8, ctx);
  CovarianceMatrix a = restrict_subsystem(cov, SubsystemSpec{1, 3}, 8);
  SkewMatrix w = entanglement_hamiltonian(a, ctx);
  SkewMatrix back = tanh_pullback(w, ctx);
  CHECK(max_diff(back.dense(), a.gamma.dense()) <= ctx.convergence_tol());
}

TEST_CASE("uniform-chain W respects the subsystem reflection") {
  // Reflection m -> 2L-1-m with the Majorana sublattice sign (-1)^m.
  PrecisionContext ctx(45);
  CovarianceMatrix cov = uniform_ground(16, ctx);
  CovarianceMatrix a = restrict_subsystem(cov, SubsystemSpec{0, 8}, 16);
  SkewMatrix w = entanglement_hamiltonian(a, ctx);
  const int d = w.dim();
  Real tol = Real::pow10(-10, ctx.bits());
  for (int m = 0; m < d; ++m)
    for (int n = m + 1; n < d; ++n) {
      Real reflected = w.at(d - 1 - m, d - 1 - n);
      if ((m + n) % 2 == 1) reflected.neg();
      CHECK(near(w.at(m, n), reflected, tol));
    }
}

TEST_CASE("single particle spectrum of pure and maximally mixed states") {
  PrecisionContext ctx(35);
  CovarianceMatrix cov = uniform_ground(8, ctx);
  SpectrumResult pure = single_particle_spectrum(cov, ctx);
  for (const Real& nu : pure.nu) CHECK(near(nu, 1.0, 1e-25));
  for (const Real& e : pure.eps) CHECK(e.is_inf());

  SkewMatrix z(6, ctx.bits());
  SpectrumResult mixed = single_particle_spectrum(make_covariance(z), ctx);
  for (const Real& nu : mixed.nu) CHECK(nu.is_zero());
  for (const Real& e : mixed.eps) CHECK(e.is_zero());
}

TEST_CASE("complement duality of the single-particle spectrum") {
  PrecisionContext ctx(50);
  ChainSpec c = build_chain(12, {DefectSpec::energy(2, "0.2")});
  SkewMatrix s = majorana_hamiltonian(c, ctx);
  CovarianceMatrix cov = ground_state_covariance(s, ctx);
  SubsystemSpec a{0, 5};
  CovarianceMatrix ca = restrict_subsystem(cov, a, 12);
  CovarianceMatrix cb = restrict_subsystem(cov, a.complement(12), 12);
  SpectrumResult spa = single_particle_spectrum(ca, ctx);
  SpectrumResult spb = single_particle_spectrum(cb, ctx);
  // Nontrivial nu (below 1 - tol) agree as multisets to 1e-20.
  Real one_gap = Real::pow10(-30, ctx.bits());
  std::vector<Real> na, nb;
  Real one = Real::one(ctx.bits());
  for (const Real& nu : spa.nu)
    if (one - nu > one_gap) na.push_back(nu);
  for (const Real& nu : spb.nu)
    if (one - nu > one_gap) nb.push_back(nu);
  REQUIRE(na.size() == nb.size());
  for (size_t k = 0; k < na.size(); ++k)
    CHECK(near(na[k], nb[k], Real::pow10(-20, ctx.bits())));
}

TEST_CASE("many body spectrum basics") {
  PrecisionContext ctx(30);
  std::vector<Real> empty;
  std::vector<Real> out = many_body_spectrum(empty, 1);
  REQUIRE(out.size() == 1);
  CHECK(out[0].is_zero());

  std::vector<Real> eps{ctx.make(0.7), ctx.make(0.3)};
  out = many_body_spectrum(eps, 4);
  REQUIRE(out.size() == 4);
  CHECK(out[0].is_zero());
  CHECK(near(out[1], 0.3, 1e-26));
  CHECK(near(out[2], 0.7, 1e-26));
  CHECK(near(out[3], 1.0, 1e-26));

  CHECK_THROWS_AS(many_body_spectrum(eps, 0), DomainError);
  std::vector<Real> bad{ctx.make(-0.1)};
  CHECK_THROWS_AS(many_body_spectrum(bad, 2), DomainError);
}

TEST_CASE("many body spectrum is the sorted subset-sum list") {
  PrecisionContext ctx(30);
  std::mt19937_64 rng(15);
  std::vector<Real> eps;
  for (int k = 0; k < 6; ++k) eps.push_back(ctx.make(std::abs(uniform(rng))));
  std::vector<Real> mine = many_body_spectrum(eps, 20);
  // Brute force all 64 subset sums.
  std::vector<Real> all;
  for (int mask = 0; mask < 64; ++mask) {
    Real sum = ctx.make(0.0);
    for (int k = 0; k < 6; ++k)
      if (mask & (1 << k)) sum += eps[k];
    all.push_back(sum);
  }
  std::sort(all.begin(), all.end());
  for (size_t k = 0; k < mine.size(); ++k)
    CHECK(near(mine[k], all[k], Real::pow10(-25, ctx.bits())));
}

TEST_CASE("antiperiodic defect: W blind to exterior defect position") {
  PrecisionContext ctx(40);
  const int n = 16;
  SubsystemSpec a{0, 8};
  // Two different exterior bonds.
  for (int exterior : {11, 13}) {
    (void)exterior;
  }
  auto w_for = [&](int bond) {
    ChainSpec c = build_chain(n, {DefectSpec::antiperiodic(bond)});
    SkewMatrix s = majorana_hamiltonian(c, ctx);
    CovarianceMatrix cov = ground_state_covariance(s, ctx, +1);
    CovarianceMatrix ca = restrict_subsystem(cov, a, n);
    return entanglement_hamiltonian(ca, ctx);
  };
  SkewMatrix w1 = w_for(11);
  SkewMatrix w2 = w_for(13);
  CHECK(max_diff(w1.dense(), w2.dense()) <= Real::pow10(-10, ctx.bits()));

  // Defect inside A: cross-defect entries flip sign, everything else equal.
  int inside = centered_defect_bond(a);
  SkewMatrix win = w_for(inside);
  const int ucut = 2 * inside + 1;  // Majorana index left of the defect bond
  Real tol = Real::pow10(-10, ctx.bits());
  for (int m = 0; m < win.dim(); ++m)
    for (int j = m + 1; j < win.dim(); ++j) {
      bool crosses = (m <= ucut) != (j <= ucut);
      Real expect = w1.at(m, j);
      if (crosses) expect.neg();
      CHECK(near(win.at(m, j), expect, tol));
    }
}
