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

#include "ehwb/observables.hpp"

#include <utility>
#include <vector>

#include "ehwb/linalg.hpp"

namespace ehwb {

namespace {

// -p ln p - q ln q with the p -> 0 limits.
Real binary_entropy(const Real& p, const Real& q) {
  Real out = Real::of(0L, p.prec());
  if (p.sign() > 0) out -= p * log(p);
  if (q.sign() > 0) out -= q * log(q);
  return out;
}

ComplexMatrix spectral_apply_complex(const EigenResult& eig,
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

Real entropy(const CovarianceMatrix& gamma_a, const PrecisionContext& ctx) {
  SpectrumResult spec = single_particle_spectrum(gamma_a, ctx);
  const mpfr_prec_t bits = ctx.bits();
  Real half = Real::of(0.5, bits);
  Real one = Real::one(bits);
  Real s = Real::of(0L, bits);
  for (const Real& nu : spec.nu) {
    Real p = (one + nu) * half;
    Real q = (one - nu) * half;
    s += binary_entropy(p, q);
  }
  return s;
}

Real renyi_entropy(const CovarianceMatrix& gamma_a, const Real& alpha,
                   const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Real one = Real::one(bits);
  if (alpha.sign() <= 0)
    throw DomainError("renyi_entropy: alpha must be positive", alpha.str(8));
  if (alpha == one)
    throw DomainError("renyi_entropy: alpha = 1 is the von Neumann limit",
                      alpha.str(8));
  SpectrumResult spec = single_particle_spectrum(gamma_a, ctx);
  Real half = Real::of(0.5, bits);
  Real acc = Real::of(0L, bits);
  for (const Real& nu : spec.nu) {
    Real p = (one + nu) * half;
    Real q = (one - nu) * half;
    Real term = Real::of(0L, bits);
    if (p.sign() > 0) term += pow(p, alpha);
    if (q.sign() > 0) term += pow(q, alpha);
    acc += log(term);
  }
  return acc / (one - alpha);
}

NegativityResult log_negativity(const CovarianceMatrix& gamma_a,
                                const BipartitionSpec& cut,
                                const PrecisionContext& ctx) {
  const int dim = gamma_a.dim();
  const int n_sites = dim / 2;
  if (cut.cut_sites < 1 || cut.cut_sites >= n_sites)
    throw DomainError("log_negativity: cut must split the subsystem",
                      std::to_string(cut.cut_sites));
  const int lcut = 2 * cut.cut_sites;  // Majorana count in the left block
  const mpfr_prec_t bits = ctx.bits();

  // Gamma_+ = [[-G_LL, i G_LR], [i G_RL, G_RR]]; Gamma_- its conjugate.
  ComplexMatrix gp(dim, dim, bits), gm(dim, dim, bits);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const bool li = i < lcut, lj = j < lcut;
      const Real& v = gamma_a.gamma.at(i, j);
      if (li && lj) {
        gp(i, j).re.set(v);
        gp(i, j).re.neg();
        gm(i, j).re.set(gp(i, j).re);
      } else if (!li && !lj) {
        gp(i, j).re.set(v);
        gm(i, j).re.set(v);
      } else {
        gp(i, j).im.set(v);
        gm(i, j).im.set(v);
        gm(i, j).im.neg();
      }
    }

  // M = 1 - Gamma_+ Gamma_-: Hermitian, eigenvalues >= 1.
  ComplexMatrix m = mul(gp, gm);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      m(i, j).re.neg();
      m(i, j).im.neg();
    }
    m(i, i).re.add(Real::one(bits));
  }
  EigenResult meig = hermitian_eigen(m, ctx, true);
  Real floor = Real::pow10(-(ctx.digits() - 8), bits);
  for (const Real& lam : meig.values)
    if (lam < floor)
      throw PrecisionEscalationError(
          "log_negativity: intermediate product matrix ill-conditioned",
          2 * ctx.digits());

  // ln Tr(rho_+ rho_-) = (1/2) sum ln(lambda_i / 2).
  Real two = Real::of(2L, bits);
  Real log_trace_prod = Real::of(0L, bits);
  for (const Real& lam : meig.values) log_trace_prod += log(lam / two);
  log_trace_prod *= Real::of(0.5, bits);

  // Spectrum of i(Gamma_+ + Gamma_-)(1 - Gamma_+Gamma_-)^{-1} via the
  // Hermitian similarity T A T with T = M^{-1/2}.
  std::vector<Real> inv_sqrt;
  inv_sqrt.reserve(dim);
  for (const Real& lam : meig.values)
    inv_sqrt.push_back(Real::one(bits) / sqrt(lam));
  ComplexMatrix t = spectral_apply_complex(meig, inv_sqrt, bits);

  // A = i (Gamma_+ + Gamma_-) = 2i * [[-G_LL, 0],[0, G_RR]].
  ComplexMatrix a(dim, dim, bits);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const bool li = i < lcut, lj = j < lcut;
      if (li != lj) continue;
      a(i, j).im.set(gamma_a.gamma.at(i, j));
      a(i, j).im.add(a(i, j).im);
      if (li) a(i, j).im.neg();
    }
  ComplexMatrix h = mul(t, mul(a, t));
  EigenResult heig = hermitian_eigen(h, ctx, false);

  // Pair magnitudes nu~_k, one per pair.
  Real one = Real::one(bits);
  Real half = Real::of(0.5, bits);
  Real e_raw = log_trace_prod * half;
  for (int k = 0; k < dim / 2; ++k) {
    Real nu = (heig.values[dim - 1 - k] - heig.values[k]) * half;
    if (nu > one) nu.set(one);
    Real p = (one + nu) * half;
    Real q = (one - nu) * half;
    e_raw += log(sqrt(p) + sqrt(q));
  }

  NegativityResult out;
  out.raw = e_raw;
  out.value = e_raw.sign() > 0 ? e_raw : Real::of(0L, bits);
  return out;
}

Real fidelity(const CovarianceMatrix& gamma_1, const CovarianceMatrix& gamma_2,
              const PrecisionContext& ctx) {
  const int dim = gamma_1.dim();
  if (gamma_2.dim() != dim)
    throw DomainError("fidelity: dimension mismatch",
                      std::to_string(gamma_2.dim()));
  const mpfr_prec_t bits = ctx.bits();
  Real one = Real::one(bits);
  Real two = Real::of(2L, bits);
  Real reg = one - Real::pow10(-(ctx.digits() - 8), bits);

  RealMatrix zero(dim, dim, bits);
  EigenResult e1 = hermitian_eigen(zero, gamma_1.gamma.dense(), ctx, true);
  EigenResult e2 = hermitian_eigen(zero, gamma_2.gamma.dense(), ctx, true);

  auto regularized = [&](const Real& x) {
    Real r = x;
    if (r > reg) r.set(reg);
    Real neg_reg = -reg;
    if (r < neg_reg) r.set(neg_reg);
    return r;
  };

  // ln det((1 - G_i)/2) over all 2L eigenvalues.
  Real logdet = Real::of(0L, bits);
  for (const Real& lam : e1.values) logdet += log((one - regularized(lam)) / two);
  for (const Real& lam : e2.values) logdet += log((one - regularized(lam)) / two);

  // sqrt(X_1) and X_2 with X = (1+G)/(1-G).
  std::vector<Real> f1, f2;
  f1.reserve(dim);
  f2.reserve(dim);
  for (const Real& lam : e1.values) {
    Real x = regularized(lam);
    f1.push_back(sqrt((one + x) / (one - x)));
  }
  for (const Real& lam : e2.values) {
    Real x = regularized(lam);
    f2.push_back((one + x) / (one - x));
  }
  ComplexMatrix s1 = spectral_apply_complex(e1, f1, bits);
  ComplexMatrix x2 = spectral_apply_complex(e2, f2, bits);
  ComplexMatrix y = mul(s1, mul(x2, s1));
  EigenResult ye = hermitian_eigen(y, ctx, false);

  // ln det(1 + sqrt(Y)).
  Real logdet_y = Real::of(0L, bits);
  for (Real lam : ye.values) {
    if (lam.sign() < 0) lam.set_si(0);
    logdet_y += log1p(sqrt(lam));
  }

  Real quarter = Real::of(0.25, bits);
  Real log_f = logdet * quarter + logdet_y * Real::of(0.5, bits);
  return exp(log_f);
}

}  // namespace ehwb
