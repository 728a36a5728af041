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

#include "ehwb/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace ehwb {

namespace {

constexpr int kMaxJacobiSweeps = 30;

// Largest |a_pq| over the strict upper triangle.
Real offdiag_max(const ComplexMatrix& a) {
  const int n = a.rows();
  Real m = Real::of(0L, a.bits());
  Real t(a.bits());
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      t.set(a(p, q).re);
      t.abs_inplace();
      if (t > m) m.set(t);
      t.set(a(p, q).im);
      t.abs_inplace();
      if (t > m) m.set(t);
    }
  return m;
}

Real offdiag_max(const RealMatrix& a) {
  const int n = a.rows();
  Real m = Real::of(0L, a.bits());
  Real t(a.bits());
  for (int p = 0; p < n; ++p)
    for (int q = p + 1; q < n; ++q) {
      t.set(a(p, q));
      t.abs_inplace();
      if (t > m) m.set(t);
    }
  return m;
}

void sort_ascending(std::vector<Real>& values, std::vector<int>& order) {
  order.resize(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int i, int j) { return values[i] < values[j]; });
  std::vector<Real> sorted;
  sorted.reserve(values.size());
  for (int idx : order) sorted.push_back(values[idx]);
  values = std::move(sorted);
}

}  // namespace

EigenResult hermitian_eigen(const ComplexMatrix& m, const PrecisionContext& ctx,
                            bool with_vectors) {
  const int n = m.rows();
  const mpfr_prec_t bits = ctx.bits();
  ComplexMatrix a(n, n, bits);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j).set(m(i, j));
  // Exact Hermitian symmetrization of the working copy.
  {
    Real half = Real::of(0.5, bits);
    Real t(bits);
    for (int i = 0; i < n; ++i) {
      a(i, i).im.set_si(0);
      for (int j = i + 1; j < n; ++j) {
        t.assign_add(a(i, j).re, a(j, i).re);
        t.mul(half);
        a(i, j).re.set(t);
        a(j, i).re.set(t);
        t.assign_sub(a(i, j).im, a(j, i).im);
        t.mul(half);
        a(i, j).im.set(t);
        a(j, i).im.set(t);
        a(j, i).im.neg();
      }
    }
  }

  ComplexMatrix v;
  if (with_vectors) v = ComplexMatrix::identity(n, bits);

  Real scale = a.max_abs();
  if (scale.is_zero()) scale.set_si(1);
  Real target = scale * Real::pow10(-(ctx.digits() - 2), bits);
  Real skip = target * Real::pow10(-2, bits);

  // Scratch values reused across rotations.
  Real absa(bits), zeta(bits), t(bits), c(bits), sigma(bits), tmp(bits),
      tmp2(bits);
  Complex u(bits), su(bits), suc(bits), x(bits), y(bits);

  int sweep = 0;
  Real off = offdiag_max(a);
  while (off > target) {
    if (++sweep > kMaxJacobiSweeps)
      throw ConvergenceError("hermitian_eigen: Jacobi did not converge",
                             off.str(8));
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        absa.set(a(p, q).abs());
        if (absa <= skip) continue;
        // zeta = (a_qq - a_pp) / (2|a_pq|); stable root of t^2 - 2 zeta t - 1:
        // t = -sign(zeta)/(|zeta| + sqrt(1 + zeta^2)), t = 1 when zeta = 0.
        zeta.assign_sub(a(q, q).re, a(p, p).re);
        tmp.assign_add(absa, absa);
        zeta.div(tmp);
        tmp.assign_mul(zeta, zeta);
        tmp.add(Real::one(bits));
        tmp.set(sqrt(tmp));
        tmp2.set(zeta);
        tmp2.abs_inplace();
        tmp.add(tmp2);
        t.set(Real::one(bits));
        t.div(tmp);
        if (zeta.sign() > 0) t.neg();
        // c = 1/sqrt(1+t^2), sigma = t*c
        tmp.assign_mul(t, t);
        tmp.add(Real::one(bits));
        c.set(Real::one(bits));
        c.div(sqrt(tmp));
        sigma.assign_mul(t, c);
        // u = a_pq/|a_pq|, su = sigma*u, suc = conj(su)
        u.re.assign_div(a(p, q).re, absa);
        u.im.assign_div(a(p, q).im, absa);
        su.re.assign_mul(sigma, u.re);
        su.im.assign_mul(sigma, u.im);
        suc.set(su);
        suc.conj_inplace();

        // New diagonal values: a_pp' = c^2 a_pp + 2 c sigma |a| + sigma^2 a_qq
        //                      a_qq' = sigma^2 a_pp - 2 c sigma |a| + c^2 a_qq
        Real app(bits), aqq(bits);
        tmp.assign_mul(c, c);
        app.assign_mul(tmp, a(p, p).re);
        aqq.assign_mul(tmp, a(q, q).re);
        tmp.assign_mul(sigma, sigma);
        app.addmul(tmp, a(q, q).re);
        aqq.addmul(tmp, a(p, p).re);
        tmp.assign_mul(c, sigma);
        tmp.add(tmp);
        tmp.mul(absa);
        app.add(tmp);
        aqq.sub(tmp);

        // Column update: col_p <- c col_p + conj(su) col_q,
        //                col_q <- -su col_p + c col_q.
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          x.set_zero();
          x.addmul_real(a(k, p), c);
          x.addmul(suc, a(k, q));
          y.set_zero();
          y.addmul_real(a(k, q), c);
          y.re.submul(su.re, a(k, p).re);
          y.re.addmul(su.im, a(k, p).im);
          y.im.submul(su.re, a(k, p).im);
          y.im.submul(su.im, a(k, p).re);
          a(k, p).set(x);
          a(k, q).set(y);
          // Hermitian mirror.
          a(p, k).set(x);
          a(p, k).conj_inplace();
          a(q, k).set(y);
          a(q, k).conj_inplace();
        }
        a(p, p).re.set(app);
        a(p, p).im.set_si(0);
        a(q, q).re.set(aqq);
        a(q, q).im.set_si(0);
        a(p, q).set_zero();
        a(q, p).set_zero();

        if (with_vectors) {
          for (int k = 0; k < n; ++k) {
            x.set_zero();
            x.addmul_real(v(k, p), c);
            x.addmul(suc, v(k, q));
            y.set_zero();
            y.addmul_real(v(k, q), c);
            y.re.submul(su.re, v(k, p).re);
            y.re.addmul(su.im, v(k, p).im);
            y.im.submul(su.re, v(k, p).im);
            y.im.submul(su.im, v(k, p).re);
            v(k, p).set(x);
            v(k, q).set(y);
          }
        }
      }
    }
    off = offdiag_max(a);
  }

  EigenResult res;
  res.values.reserve(n);
  for (int i = 0; i < n; ++i) res.values.push_back(a(i, i).re);
  std::vector<int> order;
  sort_ascending(res.values, order);
  if (with_vectors) {
    res.vectors = ComplexMatrix(n, n, bits);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) res.vectors(i, j).set(v(i, order[j]));
    res.has_vectors = true;
  }
  return res;
}

EigenResult hermitian_eigen(const RealMatrix& sym_part,
                            const RealMatrix& skew_part,
                            const PrecisionContext& ctx, bool with_vectors) {
  ComplexMatrix m =
      ComplexMatrix::from_parts(&sym_part, &skew_part, ctx.bits());
  return hermitian_eigen(m, ctx, with_vectors);
}

SymmetricEigenResult symmetric_eigen(const RealMatrix& m,
                                     const PrecisionContext& ctx,
                                     bool with_vectors) {
  const int n = m.rows();
  const mpfr_prec_t bits = ctx.bits();
  RealMatrix a(n, n, bits);
  {
    Real half = Real::of(0.5, bits);
    Real t(bits);
    for (int i = 0; i < n; ++i) {
      a(i, i).set(m(i, i));
      for (int j = i + 1; j < n; ++j) {
        t.assign_add(m(i, j), m(j, i));
        t.mul(half);
        a(i, j).set(t);
        a(j, i).set(t);
      }
    }
  }
  RealMatrix v;
  if (with_vectors) v = RealMatrix::identity(n, bits);

  Real scale = a.max_abs();
  if (scale.is_zero()) scale.set_si(1);
  Real target = scale * Real::pow10(-(ctx.digits() - 2), bits);
  Real skip = target * Real::pow10(-2, bits);

  Real absa(bits), zeta(bits), t(bits), c(bits), sigma(bits), tmp(bits),
      tmp2(bits), xp(bits), xq(bits);

  int sweep = 0;
  Real off = offdiag_max(a);
  while (off > target) {
    if (++sweep > kMaxJacobiSweeps)
      throw ConvergenceError("symmetric_eigen: Jacobi did not converge",
                             off.str(8));
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        absa.set(a(p, q));
        absa.abs_inplace();
        if (absa <= skip) continue;
        zeta.assign_sub(a(q, q), a(p, p));
        tmp.assign_add(absa, absa);
        zeta.div(tmp);
        tmp.assign_mul(zeta, zeta);
        tmp.add(Real::one(bits));
        tmp.set(sqrt(tmp));
        tmp2.set(zeta);
        tmp2.abs_inplace();
        tmp.add(tmp2);
        t.set(Real::one(bits));
        t.div(tmp);
        if (zeta.sign() > 0) t.neg();
        tmp.assign_mul(t, t);
        tmp.add(Real::one(bits));
        c.set(Real::one(bits));
        c.div(sqrt(tmp));
        sigma.assign_mul(t, c);
        // sign carried by sigma relative to a_pq: mimic the complex solver
        // with u = sign(a_pq).
        int usign = a(p, q).sign();
        Real su(bits);
        su.set(sigma);
        if (usign < 0) su.neg();

        Real app(bits), aqq(bits);
        tmp.assign_mul(c, c);
        app.assign_mul(tmp, a(p, p));
        aqq.assign_mul(tmp, a(q, q));
        tmp.assign_mul(sigma, sigma);
        app.addmul(tmp, a(q, q));
        aqq.addmul(tmp, a(p, p));
        tmp.assign_mul(c, sigma);
        tmp.add(tmp);
        tmp.mul(absa);
        app.add(tmp);
        aqq.sub(tmp);

        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          xp.assign_mul(a(k, p), c);
          xp.addmul(su, a(k, q));
          xq.assign_mul(a(k, q), c);
          xq.submul(su, a(k, p));
          a(k, p).set(xp);
          a(k, q).set(xq);
          a(p, k).set(xp);
          a(q, k).set(xq);
        }
        a(p, p).set(app);
        a(q, q).set(aqq);
        a(p, q).set_si(0);
        a(q, p).set_si(0);

        if (with_vectors) {
          for (int k = 0; k < n; ++k) {
            xp.assign_mul(v(k, p), c);
            xp.addmul(su, v(k, q));
            xq.assign_mul(v(k, q), c);
            xq.submul(su, v(k, p));
            v(k, p).set(xp);
            v(k, q).set(xq);
          }
        }
      }
    }
    off = offdiag_max(a);
  }

  SymmetricEigenResult res;
  res.values.reserve(n);
  for (int i = 0; i < n; ++i) res.values.push_back(a(i, i));
  std::vector<int> order;
  sort_ascending(res.values, order);
  if (with_vectors) {
    res.vectors = RealMatrix(n, n, bits);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) res.vectors(i, j).set(v(i, order[j]));
    res.has_vectors = true;
  }
  return res;
}

// ---- inversion -------------------------------------------------------------

namespace {

// One Newton refinement pass: X <- X (2I - M X).
RealMatrix refine_inverse(const RealMatrix& m, const RealMatrix& x) {
  RealMatrix mx = mul(m, x);
  for (int i = 0; i < mx.rows(); ++i) {
    for (int j = 0; j < mx.cols(); ++j) mx(i, j).neg();
    mx(i, i).add(Real::of(2L, mx.bits()));
  }
  return mul(x, mx);
}

ComplexMatrix refine_inverse(const ComplexMatrix& m, const ComplexMatrix& x) {
  ComplexMatrix mx = mul(m, x);
  for (int i = 0; i < mx.rows(); ++i) {
    for (int j = 0; j < mx.cols(); ++j) {
      mx(i, j).re.neg();
      mx(i, j).im.neg();
    }
    mx(i, i).re.add(Real::of(2L, mx.bits()));
  }
  return mul(x, mx);
}

}  // namespace

Inversion invert(const RealMatrix& m, const PrecisionContext& ctx,
                 bool refine) {
  const int n = m.rows();
  const mpfr_prec_t bits = ctx.bits();
  RealMatrix a(n, n, bits);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j).set(m(i, j));

  Real pivot_floor = Real::pow10(-(ctx.digits() - 5), bits);
  std::vector<int> row_of(n), col_of(n);  // pivot bookkeeping (gaussj style)
  std::vector<bool> used(n, false);
  Real log_abs_det = Real::of(0L, bits);
  int det_sign = 1;

  Real big(bits), t(bits), pivinv(bits);
  for (int step = 0; step < n; ++step) {
    // Full pivot search over unused rows/cols.
    int pr = -1, pc = -1;
    big.set_si(0);
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        t.set(a(i, j));
        t.abs_inplace();
        if (t > big) {
          big.set(t);
          pr = i;
          pc = j;
        }
      }
    }
    if (pr < 0 || big < pivot_floor)
      throw SingularMatrixError("invert: pivot below threshold", step);
    used[pc] = true;
    if (pr != pc) {
      det_sign = -det_sign;
      for (int j = 0; j < n; ++j) {
        Real tmp = a(pr, j);
        a(pr, j) = a(pc, j);
        a(pc, j) = tmp;
      }
    }
    row_of[step] = pr;
    col_of[step] = pc;
    if (a(pc, pc).sign() < 0) det_sign = -det_sign;
    log_abs_det += log(big);
    pivinv.set(Real::one(bits));
    pivinv.div(a(pc, pc));
    a(pc, pc).set(Real::one(bits));
    for (int j = 0; j < n; ++j) a(pc, j).mul(pivinv);
    for (int i = 0; i < n; ++i) {
      if (i == pc) continue;
      Real f = a(i, pc);
      a(i, pc).set_si(0);
      if (f.is_zero()) continue;
      for (int j = 0; j < n; ++j) a(i, j).submul(f, a(pc, j));
    }
  }
  // Undo column permutations (in reverse order of pivoting).
  for (int step = n - 1; step >= 0; --step) {
    if (row_of[step] == col_of[step]) continue;
    for (int i = 0; i < n; ++i) {
      Real tmp = a(i, row_of[step]);
      a(i, row_of[step]) = a(i, col_of[step]);
      a(i, col_of[step]) = tmp;
    }
  }
  if (refine) a = refine_inverse(m, a);
  return Inversion{std::move(a), std::move(log_abs_det), det_sign};
}

ComplexMatrix invert(const ComplexMatrix& m, const PrecisionContext& ctx,
                     bool refine) {
  const int n = m.rows();
  const mpfr_prec_t bits = ctx.bits();
  ComplexMatrix a(n, n, bits);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j).set(m(i, j));

  Real pivot_floor = Real::pow10(-(ctx.digits() - 5), bits);
  std::vector<int> row_of(n), col_of(n);
  std::vector<bool> used(n, false);

  Real big(bits), t(bits);
  Complex pivinv(bits), f(bits), scratch(bits);
  for (int step = 0; step < n; ++step) {
    int pr = -1, pc = -1;
    big.set_si(0);
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        // |re| + |im| as the pivot magnitude proxy.
        t.set(a(i, j).re);
        t.abs_inplace();
        Real t2 = a(i, j).im;
        t2.abs_inplace();
        t.add(t2);
        if (t > big) {
          big.set(t);
          pr = i;
          pc = j;
        }
      }
    }
    if (pr < 0 || big < pivot_floor)
      throw SingularMatrixError("invert(complex): pivot below threshold", step);
    used[pc] = true;
    if (pr != pc) {
      for (int j = 0; j < n; ++j) {
        Complex tmp = a(pr, j);
        a(pr, j) = a(pc, j);
        a(pc, j) = tmp;
      }
    }
    row_of[step] = pr;
    col_of[step] = pc;
    // pivinv = 1/pivot
    {
      Real denom = a(pc, pc).abs2();
      pivinv.re.assign_div(a(pc, pc).re, denom);
      pivinv.im.assign_div(a(pc, pc).im, denom);
      pivinv.im.neg();
    }
    a(pc, pc).re.set_si(1);
    a(pc, pc).im.set_si(0);
    for (int j = 0; j < n; ++j) {
      scratch.set_zero();
      scratch.addmul(a(pc, j), pivinv);
      a(pc, j).set(scratch);
    }
    for (int i = 0; i < n; ++i) {
      if (i == pc) continue;
      f.set(a(i, pc));
      a(i, pc).set_zero();
      if (f.re.is_zero() && f.im.is_zero()) continue;
      f.re.neg();
      f.im.neg();
      for (int j = 0; j < n; ++j) a(i, j).addmul(f, a(pc, j));
    }
  }
  for (int step = n - 1; step >= 0; --step) {
    if (row_of[step] == col_of[step]) continue;
    for (int i = 0; i < n; ++i) {
      Complex tmp = a(i, row_of[step]);
      a(i, row_of[step]) = a(i, col_of[step]);
      a(i, col_of[step]) = tmp;
    }
  }
  if (refine) a = refine_inverse(m, a);
  return a;
}

// ---- matrix functions ------------------------------------------------------

ComplexMatrix matrix_function(const ComplexMatrix& hermitian,
                              const std::function<Real(const Real&)>& f,
                              const PrecisionContext& ctx) {
  const int n = hermitian.rows();
  const mpfr_prec_t bits = ctx.bits();
  EigenResult eig = hermitian_eigen(hermitian, ctx, true);
  std::vector<Real> fv;
  fv.reserve(n);
  for (int k = 0; k < n; ++k) {
    Real y = f(eig.values[k]);
    if (y.is_nan())
      throw DomainError("matrix_function: scalar map undefined at eigenvalue",
                        eig.values[k].str(20));
    fv.push_back(std::move(y));
  }
  // result = sum_k f(lambda_k) v_k v_k^dagger
  ComplexMatrix out(n, n, bits);
  Complex w(bits);
  for (int k = 0; k < n; ++k) {
    if (fv[k].is_zero()) continue;
    for (int i = 0; i < n; ++i) {
      w.re.assign_mul(eig.vectors(i, k).re, fv[k]);
      w.im.assign_mul(eig.vectors(i, k).im, fv[k]);
      for (int j = 0; j < n; ++j) {
        // out(i,j) += w * conj(v(j,k))
        out(i, j).re.addmul(w.re, eig.vectors(j, k).re);
        out(i, j).re.addmul(w.im, eig.vectors(j, k).im);
        out(i, j).im.addmul(w.im, eig.vectors(j, k).re);
        out(i, j).im.submul(w.re, eig.vectors(j, k).im);
      }
    }
  }
  return out;
}

// ---- dilogarithm -----------------------------------------------------------

namespace {

// Series Li_2(x) = sum x^k / k^2, |x| <= 1/2.
Real dilog_series(const Real& x, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Real sum = Real::of(0L, bits);
  Real power = Real::one(bits);
  Real term(bits), kk(bits);
  Real cutoff = Real::pow10(-(ctx.digits() + 10), bits);
  for (long k = 1;; ++k) {
    power.mul(x);
    kk.set_si(k);
    kk.mul(kk);
    term.assign_div(power, kk);
    sum.add(term);
    term.abs_inplace();
    if (term < cutoff) break;
    if (k > 64 * ctx.digits())
      throw ConvergenceError("dilog series did not converge", term.str(8));
  }
  return sum;
}

}  // namespace

Real dilog(const Real& x, const PrecisionContext& ctx) {
  const mpfr_prec_t bits = ctx.bits();
  Real one = Real::one(bits);
  if (x.is_nan() || x > one || x < -one)
    throw DomainError("dilog: argument outside [-1, 1]", x.str(20));

  Real half = Real::of(0.5, bits);
  Real abs_x = abs(x);
  if (abs_x <= half) return dilog_series(x, ctx);

  Real pi = Real::pi(bits);
  if (x > half) {
    // Li2(x) = pi^2/6 - ln(x)ln(1-x) - Li2(1-x)
    Real res = pi * pi / Real::of(6L, bits);
    if (x == one) return res;
    Real omx = one - x;
    res -= log(x) * log(omx);
    res -= dilog_series(omx, ctx);
    return res;
  }
  // x < -1/2: Landen, Li2(x) = -Li2(x/(x-1)) - ln^2(1-x)/2
  Real omx = one - x;  // in (3/2, 2]
  Real arg = x / (x - one);
  Real lg = log(omx);
  return -dilog_series(arg, ctx) - lg * lg * half;
}

// ---- Newton sign iteration -------------------------------------------------

RealMatrix skew_sign(const SkewMatrix& s, const PrecisionContext& ctx) {
  const int n = s.dim();
  const mpfr_prec_t bits = ctx.bits();
  RealMatrix y(n, n, bits);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) y(i, j).set(s.at(i, j));

  Real tol = Real::pow10(-(ctx.digits() - 2), bits);
  Real half = Real::of(0.5, bits);
  const int max_iter = 80 + static_cast<int>(ctx.digits() / 8);
  Real change(bits), t(bits), t2(bits);
  for (int iter = 0; iter < max_iter; ++iter) {
    Inversion inv = invert(y, ctx, /*refine=*/false);
    // At the fixed point Y^{-1} = -Y; use max|Y + Y^{-1}| as the distance.
    Real dev = Real::of(0L, bits);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        t.assign_add(y(i, j), inv.inverse(i, j));
        t.abs_inplace();
        if (t > dev) dev.set(t);
      }
    // Norm scaling mu = (|Y^{-1}|_max / |Y|_max)^{1/2}; skipped near
    // convergence where it would only perturb the quadratic endgame.
    Real mu = Real::one(bits);
    if (dev > Real::of(0.125, bits)) {
      Real ny = y.max_abs();
      Real ninv = inv.inverse.max_abs();
      mu = sqrt(ninv / ny);
    }

    RealMatrix next(n, n, bits);
    change.set_si(0);
    // next = (mu Y - Y^{-1}/mu)/2, re-skewed exactly.
    for (int i = 0; i < n; ++i) {
      next(i, i).set_si(0);
      for (int j = i + 1; j < n; ++j) {
        t.assign_mul(mu, y(i, j));
        t2.assign_div(inv.inverse(i, j), mu);
        t.sub(t2);
        t2.assign_mul(mu, y(j, i));
        t.sub(t2);
        t2.assign_div(inv.inverse(j, i), mu);
        t.add(t2);
        t.mul(half);
        t.mul(half);
        next(i, j).set(t);
        next(j, i).set(t);
        next(j, i).neg();
        t.sub(y(i, j));
        t.abs_inplace();
        if (t > change) change.set(t);
      }
    }
    y = std::move(next);
    if (change < tol) return y;
  }
  throw ConvergenceError("skew_sign: Newton iteration did not converge",
                         change.str(8));
}

// ---- null space and subspace utilities --------------------------------------

namespace {

// Modified Gram-Schmidt on the columns of `cand` against `accepted` (both
// n x *), appending columns whose residual norm exceeds `keep_tol`.
void mgs_append(std::vector<std::vector<Real>>& accepted,
                const std::vector<Real>& candidate, const Real& keep_tol,
                mpfr_prec_t bits) {
  const int n = static_cast<int>(candidate.size());
  std::vector<Real> w = candidate;
  Real dot(bits);
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& u : accepted) {
      dot.set_si(0);
      for (int i = 0; i < n; ++i) dot.addmul(u[i], w[i]);
      for (int i = 0; i < n; ++i) w[i].submul(dot, u[i]);
    }
  }
  dot.set_si(0);
  for (int i = 0; i < n; ++i) dot.addmul(w[i], w[i]);
  Real norm = sqrt(dot);
  if (norm <= keep_tol) return;
  for (int i = 0; i < n; ++i) w[i].div(norm);
  accepted.push_back(std::move(w));
}

}  // namespace

RealMatrix skew_null_basis(const SkewMatrix& s, const Real& threshold,
                           const PrecisionContext& ctx) {
  const int n = s.dim();
  const mpfr_prec_t bits = ctx.bits();
  RealMatrix a(n, n, bits);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j).set(s.at(i, j));

  // Row-echelon elimination with full pivoting. Column permutation is
  // tracked so free columns can be read off afterwards.
  std::vector<int> colperm(n);
  std::iota(colperm.begin(), colperm.end(), 0);
  int rank = 0;
  Real big(bits), t(bits), f(bits);
  for (int step = 0; step < n; ++step) {
    int pr = -1, pc = -1;
    big.set_si(0);
    for (int i = step; i < n; ++i)
      for (int j = step; j < n; ++j) {
        t.set(a(i, j));
        t.abs_inplace();
        if (t > big) {
          big.set(t);
          pr = i;
          pc = j;
        }
      }
    if (pr < 0 || big <= threshold) break;
    rank = step + 1;
    if (pr != step)
      for (int j = 0; j < n; ++j) {
        Real tmp = a(pr, j);
        a(pr, j) = a(step, j);
        a(step, j) = tmp;
      }
    if (pc != step) {
      std::swap(colperm[pc], colperm[step]);
      for (int i = 0; i < n; ++i) {
        Real tmp = a(i, pc);
        a(i, pc) = a(i, step);
        a(i, step) = tmp;
      }
    }
    for (int i = step + 1; i < n; ++i) {
      f.assign_div(a(i, step), a(step, step));
      if (f.is_zero()) continue;
      a(i, step).set_si(0);
      for (int j = step + 1; j < n; ++j) a(i, j).submul(f, a(step, j));
    }
  }

  const int nullity = n - rank;
  RealMatrix basis(n, nullity, bits);
  if (nullity == 0) return basis;

  // Back-substitute one null vector per free column.
  std::vector<std::vector<Real>> ortho;
  Real keep = Real::of(0.5, bits);
  for (int fcol = rank; fcol < n; ++fcol) {
    std::vector<Real> xp(n, Real::of(0L, bits));  // permuted coordinates
    xp[fcol].set_si(1);
    for (int i = rank - 1; i >= 0; --i) {
      Real rhs = Real::of(0L, bits);
      for (int j = i + 1; j <= fcol; ++j) rhs.addmul(a(i, j), xp[j]);
      rhs.neg();
      rhs.div(a(i, i));
      xp[i] = rhs;
    }
    std::vector<Real> x(n, Real::of(0L, bits));
    for (int i = 0; i < n; ++i) x[colperm[i]] = xp[i];
    // Normalize before orthogonalization to keep tolerances meaningful.
    Real nrm = Real::of(0L, bits);
    for (auto& xi : x) nrm.addmul(xi, xi);
    nrm = sqrt(nrm);
    for (auto& xi : x) xi.div(nrm);
    mgs_append(ortho, x, keep, bits);
  }
  RealMatrix out(n, static_cast<int>(ortho.size()), bits);
  for (int j = 0; j < out.cols(); ++j)
    for (int i = 0; i < n; ++i) out(i, j).set(ortho[j][i]);
  return out;
}

RealMatrix orthonormal_complement(const RealMatrix& q,
                                  const PrecisionContext& ctx) {
  const int n = q.rows();
  const int k = q.cols();
  const mpfr_prec_t bits = ctx.bits();

  // Householder vectors for the QR of q.
  RealMatrix a(n, k, bits);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) a(i, j).set(q(i, j));
  std::vector<std::vector<Real>> hh;  // reflector vectors, length n each
  Real t(bits), alpha(bits), nrm(bits);
  for (int j = 0; j < k; ++j) {
    std::vector<Real> v(n, Real::of(0L, bits));
    nrm.set_si(0);
    for (int i = j; i < n; ++i) nrm.addmul(a(i, j), a(i, j));
    nrm = sqrt(nrm);
    if (a(j, j).sign() > 0) nrm.neg();  // alpha = -sign(a_jj)*|col|
    alpha.set(nrm);
    for (int i = j; i < n; ++i) v[i].set(a(i, j));
    v[j].sub(alpha);
    Real vnorm = Real::of(0L, bits);
    for (int i = j; i < n; ++i) vnorm.addmul(v[i], v[i]);
    vnorm = sqrt(vnorm);
    if (vnorm.is_zero()) {
      hh.push_back(std::move(v));
      continue;
    }
    for (int i = j; i < n; ++i) v[i].div(vnorm);
    // Apply H = I - 2vv^T to remaining columns of a.
    for (int c = j; c < k; ++c) {
      t.set_si(0);
      for (int i = j; i < n; ++i) t.addmul(v[i], a(i, c));
      t.add(t);
      for (int i = j; i < n; ++i) a(i, c).submul(t, v[i]);
    }
    hh.push_back(std::move(v));
  }

  // Complement columns: H_0 H_1 ... H_{k-1} e_m for m = k..n-1.
  RealMatrix out(n, n - k, bits);
  std::vector<Real> w(n, Real::of(0L, bits));
  for (int m = k; m < n; ++m) {
    for (int i = 0; i < n; ++i) w[i].set_si(i == m ? 1 : 0);
    for (int j = k - 1; j >= 0; --j) {
      t.set_si(0);
      for (int i = j; i < n; ++i) t.addmul(hh[j][i], w[i]);
      t.add(t);
      for (int i = j; i < n; ++i) w[i].submul(t, hh[j][i]);
    }
    for (int i = 0; i < n; ++i) out(i, m - k).set(w[i]);
  }
  return out;
}

RealMatrix canonical_subspace_basis(const RealMatrix& basis,
                                    const PrecisionContext& ctx) {
  const int n = basis.rows();
  const int k = basis.cols();
  const mpfr_prec_t bits = ctx.bits();
  std::vector<std::vector<Real>> ortho;
  Real keep = Real::of(0.125, bits);
  Real dot(bits);
  for (int m = 0; m < n && static_cast<int>(ortho.size()) < k; ++m) {
    // Project e_m onto span(basis): w = B (B^T e_m).
    std::vector<Real> w(n, Real::of(0L, bits));
    for (int j = 0; j < k; ++j) {
      dot.set(basis(m, j));
      for (int i = 0; i < n; ++i) w[i].addmul(dot, basis(i, j));
    }
    mgs_append(ortho, w, keep, bits);
  }
  RealMatrix out(n, static_cast<int>(ortho.size()), bits);
  for (int j = 0; j < out.cols(); ++j)
    for (int i = 0; i < n; ++i) out(i, j).set(ortho[j][i]);
  return out;
}

int pfaffian_sign(const SkewMatrix& s, const PrecisionContext& ctx) {
  const int n = s.dim();
  const mpfr_prec_t bits = ctx.bits();
  RealMatrix a(n, n, bits);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j).set(s.at(i, j));

  // Parlett-Reid reduction to skew tridiagonal form by congruence.
  int sign = 1;
  Real big(bits), t(bits), f(bits);
  for (int k = 0; k + 1 < n; k += 2) {
    // Pivot: bring the largest |a(i,k)|, i>k, into position (k+1,k).
    int pr = -1;
    big.set_si(0);
    for (int i = k + 1; i < n; ++i) {
      t.set(a(i, k));
      t.abs_inplace();
      if (t > big) {
        big.set(t);
        pr = i;
      }
    }
    if (pr < 0 || big.is_zero())
      throw SingularMatrixError("pfaffian_sign: singular input", k);
    if (pr != k + 1) {
      sign = -sign;  // congruence swap of rows+cols pr <-> k+1
      for (int j = 0; j < n; ++j) {
        Real tmp = a(pr, j);
        a(pr, j) = a(k + 1, j);
        a(k + 1, j) = tmp;
      }
      for (int i = 0; i < n; ++i) {
        Real tmp = a(i, pr);
        a(i, pr) = a(i, k + 1);
        a(i, k + 1) = tmp;
      }
    }
    // Eliminate column k below row k+1 (and symmetrically).
    for (int i = k + 2; i < n; ++i) {
      f.assign_div(a(i, k), a(k + 1, k));
      if (f.is_zero()) continue;
      for (int j = 0; j < n; ++j) a(i, j).submul(f, a(k + 1, j));
      for (int j = 0; j < n; ++j) a(j, i).submul(f, a(j, k + 1));
    }
    if (a(k, k + 1).sign() < 0) sign = -sign;
  }
  return sign;
}

// ---- skew Schur form --------------------------------------------------------

SchurForm skew_schur(const SkewMatrix& s, const PrecisionContext& ctx) {
  const int n = s.dim();
  const mpfr_prec_t bits = ctx.bits();

  // Eigendecomposition of the Hermitian matrix iS.
  RealMatrix zero(n, n, bits);
  EigenResult eig = hermitian_eigen(zero, s.dense(), ctx, true);

  // Pair lambda_i with lambda_{n-1-i}; eps = (lambda_hi - lambda_lo)/2 >= 0.
  const int npairs = n / 2;
  std::vector<Real> eps;
  eps.reserve(npairs);
  Real half = Real::of(0.5, bits);
  for (int i = 0; i < npairs; ++i) {
    Real e = (eig.values[n - 1 - i] - eig.values[i]) * half;
    eps.push_back(std::move(e));
  }
  // eps is descending by construction (values ascending).

  // Zero-mode threshold: eps below 10^-(digits/2) count as zero blocks.
  Real zero_tol = Real::pow10(-(ctx.digits() / 2), bits);
  // Grouping tolerance for degenerate eps. Tight: splitting a true
  // degenerate group is harmless (any orthonormal pairing of a degenerate
  // subspace is canonical), merging distinct eps is not.
  Real scale = s.dense().max_abs();
  if (scale.is_zero()) scale.set_si(1);
  Real group_tol = scale * Real::pow10(-(ctx.digits() - 4), bits);

  RealMatrix u(n, n, bits);
  std::vector<std::vector<Real>> placed;  // accepted U columns, for MGS
  std::vector<Real> block_values;
  block_values.reserve(npairs);

  Real dot(bits), t(bits);
  Real orient_cut = Real::pow10(-(ctx.digits() / 2), bits);
  auto column_norm = [&](const std::vector<Real>& w) {
    Real nn = Real::of(0L, bits);
    for (const Real& wi : w) nn.addmul(wi, wi);
    return sqrt(nn);
  };
  auto orient = [&](std::vector<Real>& av, std::vector<Real>& bv) {
    for (int r = 0; r < n; ++r) {
      t.set(av[r]);
      t.abs_inplace();
      if (t > orient_cut) {
        if (av[r].sign() < 0)
          for (int rr = 0; rr < n; ++rr) {
            av[rr].neg();
            bv[rr].neg();
          }
        return;
      }
    }
  };
  auto place_pair = [&](std::vector<Real>& av, std::vector<Real>& bv, int col) {
    for (int r = 0; r < n; ++r) {
      u(r, col).set(av[r]);
      u(r, col + 1).set(bv[r]);
    }
    placed.push_back(av);
    placed.push_back(bv);
  };

  int col = 0;
  int i = 0;
  while (i < npairs) {
    // Collect the degenerate group [i, j).
    int j = i + 1;
    while (j < npairs && abs(eps[i] - eps[j]) <= group_tol) ++j;
    const int m = j - i;  // pairs in this group
    const bool zero_block = eps[i] < zero_tol;

    // Real span of the group's eigenvectors: real and imaginary parts of
    // the +eps columns; for zero groups the -eps side is not the complex
    // conjugate of the +eps side, so both sides are needed to span.
    std::vector<std::vector<Real>> cand;
    auto push_column = [&](int vc) {
      std::vector<Real> re(n, Real::of(0L, bits)), im(n, Real::of(0L, bits));
      for (int r = 0; r < n; ++r) {
        re[r].set(eig.vectors(r, vc).re);
        im[r].set(eig.vectors(r, vc).im);
      }
      cand.push_back(std::move(re));
      cand.push_back(std::move(im));
    };
    for (int p = i; p < j; ++p) push_column(n - 1 - p);
    if (zero_block)
      for (int p = i; p < j; ++p) push_column(p);

    if (zero_block) {
      // Canonical deterministic basis of the null space: depends only on
      // the subspace, so the deflation-based covariance path reproduces
      // the exact same pairing.
      RealMatrix raw;
      {
        std::vector<std::vector<Real>> ortho;
        Real keep = Real::of(0.125, bits);
        for (auto& cvec : cand) mgs_append(ortho, cvec, keep, bits);
        raw = RealMatrix(n, static_cast<int>(ortho.size()), bits);
        for (int c = 0; c < raw.cols(); ++c)
          for (int r = 0; r < n; ++r) raw(r, c).set(ortho[c][r]);
      }
      RealMatrix canon = canonical_subspace_basis(raw, ctx);
      for (int c = 0; c + 1 < canon.cols(); c += 2) {
        std::vector<Real> av(n, Real::of(0L, bits)), bv(n, Real::of(0L, bits));
        for (int r = 0; r < n; ++r) {
          av[r].set(canon(r, c));
          bv[r].set(canon(r, c + 1));
        }
        orient(av, bv);
        place_pair(av, bv, col);
        block_values.push_back(Real::of(0L, bits));
        col += 2;
      }
      i = j;
      continue;
    }

    // Nonzero group: pick a from the candidates, set b = S a / |S a|.
    for (int pair = 0; pair < m; ++pair) {
      int best = -1;
      Real best_norm = Real::of(0L, bits);
      std::vector<std::vector<Real>> residuals(cand.size());
      for (size_t cidx = 0; cidx < cand.size(); ++cidx) {
        std::vector<Real> w = cand[cidx];
        for (int pass = 0; pass < 2; ++pass)
          for (const auto& uvec : placed) {
            dot.set_si(0);
            for (int r = 0; r < n; ++r) dot.addmul(uvec[r], w[r]);
            for (int r = 0; r < n; ++r) w[r].submul(dot, uvec[r]);
          }
        Real nn = column_norm(w);
        if (nn > best_norm) {
          best_norm = nn;
          best = static_cast<int>(cidx);
        }
        residuals[cidx] = std::move(w);
      }
      std::vector<Real> av = residuals[best];
      for (auto& x : av) x.div(best_norm);
      std::vector<Real> bv(n, Real::of(0L, bits));
      for (int r = 0; r < n; ++r) {
        Real& acc = bv[r];
        for (int cc = 0; cc < n; ++cc) acc.addmul(s.at(r, cc), av[cc]);
      }
      Real beta = column_norm(bv);  // per-pair block value, |S a|
      for (auto& x : bv) x.div(beta);
      orient(av, bv);
      place_pair(av, bv, col);
      block_values.push_back(std::move(beta));
      col += 2;
    }
    i = j;
  }

  // Stable descending order of blocks (column pairs move with their value).
  std::vector<int> order(block_values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return block_values[a] > block_values[b];
  });
  SchurForm out;
  out.rotation = RealMatrix(n, n, bits);
  out.block_values.reserve(block_values.size());
  for (size_t k = 0; k < order.size(); ++k) {
    out.block_values.push_back(block_values[order[k]]);
    for (int r = 0; r < n; ++r) {
      out.rotation(r, static_cast<int>(2 * k)).set(u(r, 2 * order[k]));
      out.rotation(r, static_cast<int>(2 * k + 1)).set(u(r, 2 * order[k] + 1));
    }
  }
  return out;
}

}  // namespace ehwb
