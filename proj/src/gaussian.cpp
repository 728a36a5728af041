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

#include "ehwb/gaussian.hpp"

#include <algorithm>
#include <queue>
#include <utility>

namespace ehwb {

namespace {

Real purity_defect_of(const SkewMatrix& gamma) {
  RealMatrix g2 = mul(gamma.dense(), gamma.dense());
  for (int i = 0; i < g2.rows(); ++i) g2(i, i) += Real::one(g2.bits());
  return g2.max_abs();
}

// Gamma contribution of pure pair filling on consecutive column pairs of
// `basis`: sum_i (b_i a_i^T - a_i b_i^T).
void add_pair_filling(RealMatrix& gamma, const RealMatrix& basis, int sign) {
  const int n = gamma.rows();
  Real s = Real::of(static_cast<long>(sign), gamma.bits());
  for (int p = 0; p + 1 < basis.cols(); p += 2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Real t(gamma.bits());
        t.assign_mul(basis(i, p + 1), basis(j, p));
        t.submul(basis(i, p), basis(j, p + 1));
        t.mul(s);
        gamma(i, j).add(t);
      }
  }
}

// Ground covariance through the full Schur route; zero blocks collected
// into `zero_basis` (canonical pairing) and left unfilled here.
RealMatrix schur_route_covariance(const SkewMatrix& s,
                                  const PrecisionContext& ctx,
                                  const Real& zero_tol,
                                  RealMatrix& zero_basis) {
  const int n = s.dim();
  SchurForm f = skew_schur(s, ctx);
  RealMatrix gamma(n, n, ctx.bits());
  int zero_cols = 0;
  for (size_t k = 0; k < f.block_values.size(); ++k)
    if (f.block_values[k] < zero_tol) zero_cols += 2;
  RealMatrix zeros(n, zero_cols, ctx.bits());
  int zc = 0;
  for (size_t k = 0; k < f.block_values.size(); ++k) {
    const int c = static_cast<int>(2 * k);
    if (f.block_values[k] < zero_tol) {
      for (int i = 0; i < n; ++i) {
        zeros(i, zc).set(f.rotation(i, c));
        zeros(i, zc + 1).set(f.rotation(i, c + 1));
      }
      zc += 2;
      continue;
    }
    RealMatrix pair(n, 2, ctx.bits());
    for (int i = 0; i < n; ++i) {
      pair(i, 0).set(f.rotation(i, c));
      pair(i, 1).set(f.rotation(i, c + 1));
    }
    add_pair_filling(gamma, pair, +1);
  }
  zero_basis = zero_cols > 0 ? canonical_subspace_basis(zeros, ctx)
                             : RealMatrix(n, 0, ctx.bits());
  return gamma;
}

}  // namespace

CovarianceMatrix make_covariance(SkewMatrix gamma) {
  Real defect = purity_defect_of(gamma);
  return CovarianceMatrix{std::move(gamma), std::move(defect)};
}

CovarianceMatrix ground_state_covariance(const SkewMatrix& s,
                                         const PrecisionContext& ctx,
                                         int target_parity) {
  const int n = s.dim();
  const mpfr_prec_t bits = ctx.bits();
  Real zero_tol = Real::pow10(-(ctx.digits() / 2), bits);

  RealMatrix gamma(n, n, bits);
  RealMatrix zero_basis(n, 0, bits);

  RealMatrix null_basis = skew_null_basis(s, zero_tol, ctx);
  if (null_basis.cols() == 0) {
    try {
      gamma = skew_sign(s, ctx);
    } catch (const Error&) {
      gamma = schur_route_covariance(s, ctx, zero_tol, zero_basis);
    }
  } else {
    try {
      // Deflate: sign iteration on the nonsingular complement.
      RealMatrix comp = orthonormal_complement(null_basis, ctx);
      RealMatrix s_comp = congruence(comp, s.dense());
      RealMatrix gamma_comp = skew_sign(SkewMatrix::from_dense(s_comp), ctx);
      gamma = mul(comp, mul(gamma_comp, comp.transposed()));
      zero_basis = canonical_subspace_basis(null_basis, ctx);
    } catch (const Error&) {
      gamma = schur_route_covariance(s, ctx, zero_tol, zero_basis);
    }
  }

  if (zero_basis.cols() > 0) {
    add_pair_filling(gamma, zero_basis, +1);
    SkewMatrix g = SkewMatrix::from_dense(gamma);
    if (pfaffian_sign(g, ctx) != target_parity) {
      // Swap the roles of the first zero pair: flips exactly that block's
      // filling sign, and with it the parity.
      RealMatrix first(n, 2, bits);
      for (int i = 0; i < n; ++i) {
        first(i, 0).set(zero_basis(i, 0));
        first(i, 1).set(zero_basis(i, 1));
      }
      add_pair_filling(gamma, first, -1);
      add_pair_filling(gamma, first, -1);
    }
  }

  return make_covariance(SkewMatrix::from_dense(gamma));
}

CovarianceMatrix restrict_subsystem(const CovarianceMatrix& full,
                                    const SubsystemSpec& subsystem,
                                    int n_sites) {
  std::vector<int> idx = subsystem.majorana_indices(n_sites);
  if (static_cast<int>(idx.size()) > full.dim())
    throw DomainError("restrict_subsystem: subsystem exceeds system",
                      std::to_string(idx.size()));
  for (int m : idx)
    if (m >= full.dim())
      throw DomainError("restrict_subsystem: index out of range",
                        std::to_string(m));
  const int d = static_cast<int>(idx.size());
  SkewMatrix sub(d, full.gamma.bits());
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      sub.set(i, j, full.gamma.at(idx[i], idx[j]));
  return make_covariance(std::move(sub));
}

namespace {

ComplexMatrix spectral_apply(const EigenResult& eig,
                             const std::vector<Real>& fvals,
                             mpfr_prec_t bits) {
  const int n = static_cast<int>(eig.values.size());
  ComplexMatrix out(n, n, bits);
  Complex w(bits);
  for (int k = 0; k < n; ++k) {
    if (fvals[k].is_zero()) continue;
    for (int i = 0; i < n; ++i) {
      w.re.assign_mul(eig.vectors(i, k).re, fvals[k]);
      w.im.assign_mul(eig.vectors(i, k).im, fvals[k]);
      for (int j = 0; j < n; ++j) {
        out(i, j).re.addmul(w.re, eig.vectors(j, k).re);
        out(i, j).re.addmul(w.im, eig.vectors(j, k).im);
        out(i, j).im.addmul(w.im, eig.vectors(j, k).re);
        out(i, j).im.submul(w.re, eig.vectors(j, k).im);
      }
    }
  }
  return out;
}

}  // namespace

SkewMatrix entanglement_hamiltonian(const CovarianceMatrix& gamma_a,
                                    const PrecisionContext& ctx) {
  const int n = gamma_a.dim();
  const mpfr_prec_t bits = ctx.bits();
  RealMatrix zero(n, n, bits);
  EigenResult eig = hermitian_eigen(zero, gamma_a.gamma.dense(), ctx, true);

  Real guard = Real::one(bits) - Real::pow10(-(ctx.digits() - 8), bits);
  Real one = Real::one(bits);
  std::vector<Real> fvals;
  fvals.reserve(n);
  for (const Real& lam : eig.values) {
    Real a = abs(lam);
    if (a >= guard)
      throw PrecisionEscalationError(
          "entanglement_hamiltonian: single-particle value too close to 1 "
          "(|nu| = " +
              a.str(12) + ")",
          2 * ctx.digits());
    fvals.push_back(log((one + lam) / (one - lam)));
  }
  ComplexMatrix k = spectral_apply(eig, fvals, bits);
  // K is purely imaginary Hermitian; W = Im K is real skew.
  return SkewMatrix::from_dense(k.imag_part());
}

SkewMatrix entanglement_hamiltonian_via_inverse(const CovarianceMatrix& gamma_a,
                                                const PrecisionContext& ctx) {
  const int n = gamma_a.dim();
  const mpfr_prec_t bits = ctx.bits();
  // G = 1 + i Gamma_A
  ComplexMatrix g(n, n, bits);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j).im.set(gamma_a.gamma.at(i, j));
    g(i, i).re.set_si(1);
  }
  ComplexMatrix ginv = invert(g, ctx);
  // T = 2 G^{-1} - 1 (Hermitian), K = -log T.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      ginv(i, j).re.add(ginv(i, j).re);
      ginv(i, j).im.add(ginv(i, j).im);
    }
    ginv(i, i).re.sub(Real::one(bits));
  }
  ComplexMatrix k = matrix_function(
      ginv, [](const Real& x) { return -log(x); }, ctx);
  return SkewMatrix::from_dense(k.imag_part());
}

SpectrumResult single_particle_spectrum(const CovarianceMatrix& gamma_a,
                                        const PrecisionContext& ctx) {
  const int n = gamma_a.dim();
  const mpfr_prec_t bits = ctx.bits();
  // nu_k^2 are the (doubly degenerate) eigenvalues of -Gamma^2, which is
  // real symmetric; cheaper than the complex solver and equivalent for
  // the pair magnitudes.
  RealMatrix g2 = mul(gamma_a.gamma.dense(), gamma_a.gamma.dense());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g2(i, j).neg();
  SymmetricEigenResult eig = symmetric_eigen(g2, ctx, false);

  SpectrumResult out;
  out.max_clamp = Real::of(0L, bits);
  Real one = Real::one(bits);
  for (int k = n - 1; k >= 0; k -= 2) {  // descending, one per pair
    Real lam = eig.values[k];
    if (lam.sign() < 0) lam.set_si(0);
    Real nu = sqrt(lam);
    if (nu > one) {
      Real clamp = nu - one;
      if (clamp > out.max_clamp) out.max_clamp.set(clamp);
      nu.set(one);
    }
    Real epsk(bits);
    if (nu == one) {
      epsk.set_inf(+1);
    } else {
      epsk = log((one + nu) / (one - nu));
    }
    out.nu.push_back(std::move(nu));
    out.eps.push_back(std::move(epsk));
  }
  return out;
}

std::vector<Real> many_body_spectrum(const std::vector<Real>& eps, int count) {
  if (count < 1)
    throw DomainError("many_body_spectrum: count must be >= 1",
                      std::to_string(count));
  mpfr_prec_t bits = 64;
  for (const Real& e : eps) {
    if (e.is_nan() || e.is_inf())
      throw DomainError("many_body_spectrum: eps must be finite", e.str(8));
    if (e.sign() < 0)
      throw DomainError("many_body_spectrum: eps must be non-negative",
                        e.str(8));
    bits = std::max(bits, e.prec());
  }
  std::vector<Real> sorted = eps;
  std::sort(sorted.begin(), sorted.end());

  std::vector<Real> out;
  out.push_back(Real::of(0L, bits));
  if (sorted.empty() || count == 1) return out;

  // Best-first over (partial sum, index of last included element).
  using Node = std::pair<Real, size_t>;
  auto cmp = [](const Node& a, const Node& b) { return b.first < a.first; };
  std::priority_queue<Node, std::vector<Node>, decltype(cmp)> heap(cmp);
  heap.push({sorted[0], 0});
  while (static_cast<int>(out.size()) < count && !heap.empty()) {
    Node top = heap.top();
    heap.pop();
    out.push_back(top.first);
    size_t i = top.second;
    if (i + 1 < sorted.size()) {
      heap.push({top.first + sorted[i + 1], i + 1});
      heap.push({top.first - sorted[i] + sorted[i + 1], i + 1});
    }
  }
  return out;
}

int state_parity(const CovarianceMatrix& gamma, const PrecisionContext& ctx) {
  return pfaffian_sign(gamma.gamma, ctx);
}

}  // namespace ehwb
