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

#ifndef EHWB_TESTS_TEST_SUPPORT_HPP_
#define EHWB_TESTS_TEST_SUPPORT_HPP_

#include <cmath>
#include <random>
#include <vector>

#include "ehwb/linalg.hpp"
#include "ehwb/matrix.hpp"
#include "ehwb/precision.hpp"

namespace ehwb_test {

using ehwb::ComplexMatrix;
using ehwb::PrecisionContext;
using ehwb::Real;
using ehwb::RealMatrix;
using ehwb::SkewMatrix;

inline double uniform(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
}

inline RealMatrix random_symmetric(int n, std::mt19937_64& rng,
                                   const PrecisionContext& ctx) {
  RealMatrix m(n, n, ctx.bits());
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double x = uniform(rng);
      m(i, j).set_d(x);
      m(j, i).set_d(x);
    }
  return m;
}

inline SkewMatrix random_skew(int n, std::mt19937_64& rng,
                              const PrecisionContext& ctx) {
  SkewMatrix s(n, ctx.bits());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      s.set(i, j, Real::of(uniform(rng), ctx.bits()));
  return s;
}

inline bool near(const Real& a, const Real& b, const Real& tol) {
  Real d = a - b;
  d.abs_inplace();
  return d <= tol;
}

inline bool near(const Real& a, double b, double tol) {
  Real d = a - Real::of(b, a.prec());
  d.abs_inplace();
  return d <= Real::of(tol, a.prec());
}

// max_ij |A_ij - B_ij|
inline Real max_diff(const RealMatrix& a, const RealMatrix& b) {
  Real m = Real::of(0L, a.bits());
  Real t(a.bits());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      t.assign_sub(a(i, j), b(i, j));
      t.abs_inplace();
      if (t > m) m.set(t);
    }
  return m;
}

// Plain double-precision cyclic Jacobi for real symmetric matrices.
// Deliberately independent of the library implementation; serves as the
// reference eigensolver for small cases.
inline std::vector<double> double_jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const int n = static_cast<int>(a.size());
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off = std::max(off, std::fabs(a[p][q]));
    if (off < 1e-15) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::fabs(a[p][q]) < 1e-18) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(1 + theta * theta));
        double c = 1 / std::sqrt(1 + t * t);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> vals(n);
  for (int i = 0; i < n; ++i) vals[i] = a[i][i];
  std::sort(vals.begin(), vals.end());
  return vals;
}

}  // namespace ehwb_test

#endif  // EHWB_TESTS_TEST_SUPPORT_HPP_
