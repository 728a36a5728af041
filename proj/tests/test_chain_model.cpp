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
#include "ehwb/linalg.hpp"
#include "test_support.hpp"

using namespace ehwb;
using namespace ehwb_test;

TEST_CASE("build_chain uniform") {
  ChainSpec c = build_chain(8, {});
  for (int j = 0; j < 8; ++j) {
    CHECK(c.bond_couplings[j] == "1");
    CHECK(c.site_fields[j] == "1");
  }
  CHECK(c.duality_bonds.empty());
  CHECK(c.fermion_boundary_sign == -1);
}

TEST_CASE("build_chain energy defect") {
  ChainSpec c = build_chain(16, {DefectSpec::energy(3, "0.2")});
  CHECK(c.bond_couplings[3] == "0.2");
  for (int j = 0; j < 16; ++j)
    if (j != 3) CHECK(c.bond_couplings[j] == "1");
}

TEST_CASE("build_chain antiperiodic defect") {
  ChainSpec c = build_chain(16, {DefectSpec::antiperiodic(3)});
  CHECK(c.bond_couplings[3] == "-1");
}

TEST_CASE("build_chain rejects bad input") {
  CHECK_THROWS_AS(build_chain(7, {}), DomainError);
  CHECK_THROWS_AS(build_chain(6, {}), DomainError);
  CHECK_THROWS_AS(build_chain(8, {DefectSpec::energy(9, "0.5")}), DomainError);
  CHECK_THROWS_AS(
      build_chain(8, {DefectSpec::energy(2, "0.5"), DefectSpec::duality(2)}),
      DomainError);
}

TEST_CASE("centered defect bond") {
  CHECK(centered_defect_bond(SubsystemSpec{0, 8}) == 3);
  CHECK(centered_defect_bond(SubsystemSpec{0, 256}) == 127);
  CHECK(centered_defect_bond(SubsystemSpec{4, 8}) == 7);
  CHECK_THROWS_AS(centered_defect_bond(SubsystemSpec{0, 7}), DomainError);
}

TEST_CASE("placement conventions") {
  SubsystemSpec half{0, 16};
  CHECK(antipodal_bond(centered_defect_bond(half), 32) == 23);
  CHECK(boundary_bond(half, 32) == 31);
  CHECK(boundary_bond(SubsystemSpec{4, 8}, 32) == 3);
}

TEST_CASE("subsystem wraparound indices are contiguous mod 2N") {
  SubsystemSpec sub{7, 2};  // sites 7, 0 on an 8-ring
  std::vector<int> idx = sub.majorana_indices(8);
  CHECK(idx == std::vector<int>{14, 15, 0, 1});
}

TEST_CASE("majorana kernel structure for the uniform chain") {
  PrecisionContext ctx(30);
  ChainSpec c = build_chain(8, {});
  SkewMatrix s = majorana_hamiltonian(c, ctx);
  CHECK(s.dim() == 16);
  // Row for Majorana 5 couples exactly to 4 and 6.
  for (int j = 0; j < 16; ++j) {
    bool expect_nonzero = (j == 4 || j == 6);
    CHECK(s.at(5, j).is_zero() == !expect_nonzero);
  }
  CHECK(near(s.at(5, 6), 0.5, 1e-28));
  CHECK(near(s.at(4, 5), -0.5, 1e-28));
  // At most 2 nonzero entries per row.
  for (int i = 0; i < 16; ++i) {
    int nz = 0;
    for (int j = 0; j < 16; ++j)
      if (!s.at(i, j).is_zero()) ++nz;
    CHECK(nz <= 2);
  }
}

TEST_CASE("duality bond skips a majorana site") {
  PrecisionContext ctx(30);
  ChainSpec c = build_chain(8, {DefectSpec::duality(2)});
  SkewMatrix s = majorana_hamiltonian(c, ctx);
  for (int j = 0; j < 16; ++j) {
    CHECK(s.at(6, j).is_zero());
    CHECK(s.at(j, 6).is_zero());
  }
  CHECK(!s.at(5, 7).is_zero());
}

TEST_CASE("boundary sign flips only the ring-closing entries") {
  PrecisionContext ctx(30);
  ChainSpec ap = build_chain(8, {});
  ChainSpec p = build_chain(8, {}, +1);
  SkewMatrix sap = majorana_hamiltonian(ap, ctx);
  SkewMatrix sp = majorana_hamiltonian(p, ctx);
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j) {
      bool ring = (i == 15 && j == 0) || (i == 0 && j == 15);
      Real expect = sap.at(i, j);
      if (ring) expect.neg();
      CHECK(near(sp.at(i, j), expect, ctx.convergence_tol()));
    }
}

TEST_CASE("energy defect of strength 1 is no defect") {
  PrecisionContext ctx(30);
  SkewMatrix a =
      majorana_hamiltonian(build_chain(12, {DefectSpec::energy(5, "1")}), ctx);
  SkewMatrix b = majorana_hamiltonian(build_chain(12, {}), ctx);
  CHECK(max_diff(a.dense(), b.dense()).is_zero());
}

TEST_CASE("uniform chain single-particle spectrum is the analytic one") {
  // Antiperiodic sector: eps_k = sin((2k+1) pi / (2N)), each momentum pair.
  PrecisionContext ctx(40);
  const int n = 8;
  ChainSpec c = build_chain(n, {});
  SkewMatrix s = majorana_hamiltonian(c, ctx);
  SchurForm f = skew_schur(s, ctx);
  std::vector<Real> analytic;
  Real pi = Real::pi(ctx.bits());
  for (int k = 0; k < n; ++k) {
    Real q = pi * ctx.make_int(2 * k + 1) / ctx.make_int(2 * n);
    analytic.push_back(abs(sin(q)));
  }
  std::sort(analytic.begin(), analytic.end());
  std::vector<Real> got = f.block_values;
  std::sort(got.begin(), got.end());
  REQUIRE(got.size() == analytic.size());
  for (size_t k = 0; k < got.size(); ++k)
    CHECK(near(got[k], analytic[k], Real::pow10(-10, ctx.bits())));
}

TEST_CASE("periodic sector has an exact zero mode at criticality") {
  PrecisionContext ctx(40);
  ChainSpec c = build_chain(8, {}, +1);
  SkewMatrix s = majorana_hamiltonian(c, ctx);
  SchurForm f = skew_schur(s, ctx);
  // Smallest block value is 0 (q = 0 Majorana mode).
  CHECK(f.block_values.back() <= Real::pow10(-20, ctx.bits()));
}
