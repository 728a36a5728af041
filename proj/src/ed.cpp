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

#include "ehwb/ed.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <utility>

#include "ehwb/linalg.hpp"

namespace ehwb {

const PrecisionContext& ed_context() {
  static const PrecisionContext ctx(kEdDigits);
  return ctx;
}

namespace {

using CVec = std::vector<Complex>;

CVec zero_vec(size_t dim, mpfr_prec_t bits) {
  return CVec(dim, Complex::zero(bits));
}

void vec_set_zero(CVec& v) {
  for (auto& z : v) z.set_zero();
}

Complex inner(const CVec& a, const CVec& b) {
  Complex acc = Complex::zero(a[0].re.prec());
  for (size_t i = 0; i < a.size(); ++i) acc.addmul_conj(a[i], b[i]);
  return acc;
}

Real norm2(const CVec& a) {
  Real acc = Real::of(0L, a[0].re.prec());
  for (const auto& z : a) {
    acc.addmul(z.re, z.re);
    acc.addmul(z.im, z.im);
  }
  return sqrt(acc);
}

void scale(CVec& a, const Real& s) {
  for (auto& z : a) {
    z.re.mul(s);
    z.im.mul(s);
  }
}

// a -= c*b
void axpy_neg(CVec& a, const Complex& c, const CVec& b) {
  Complex mc = c;
  mc.re.neg();
  mc.im.neg();
  for (size_t i = 0; i < a.size(); ++i) a[i].addmul(mc, b[i]);
}

void orthogonalize(CVec& v, const std::vector<const CVec*>& against) {
  for (int pass = 0; pass < 2; ++pass)
    for (const CVec* u : against) axpy_neg(v, inner(*u, v), *u);
}

// ---- tridiagonal utilities (for Lanczos Ritz extraction) -------------------

// Number of eigenvalues of the symmetric tridiagonal (alpha, beta) below x.
int sturm_count(const std::vector<Real>& alpha, const std::vector<Real>& beta,
                const Real& x, mpfr_prec_t bits) {
  const int k = static_cast<int>(alpha.size());
  int count = 0;
  Real d = Real::of(1L, bits);
  Real tiny = Real::pow10(-2 * kEdDigits, bits);
  for (int i = 0; i < k; ++i) {
    Real q = alpha[i] - x;
    if (i > 0) {
      Real b2 = beta[i - 1] * beta[i - 1];
      q -= b2 / d;
    }
    if (q.is_zero() || (q > -tiny && q < tiny)) q = -tiny;
    if (q.sign() < 0) ++count;
    d = q;
  }
  return count;
}

Real tridiag_smallest_eigenvalue(const std::vector<Real>& alpha,
                                 const std::vector<Real>& beta,
                                 mpfr_prec_t bits) {
  // Gershgorin bounds.
  Real lo(bits), hi(bits);
  const int k = static_cast<int>(alpha.size());
  for (int i = 0; i < k; ++i) {
    Real r = Real::of(0L, bits);
    if (i > 0) r += abs(beta[i - 1]);
    if (i < k - 1) r += abs(beta[i]);
    Real l = alpha[i] - r, h = alpha[i] + r;
    if (i == 0 || l < lo) lo = l;
    if (i == 0 || h > hi) hi = h;
  }
  Real target = Real::pow10(-(kEdDigits - 4), bits);
  Real half = Real::of(0.5, bits);
  while (hi - lo > target) {
    Real mid = (lo + hi) * half;
    if (sturm_count(alpha, beta, mid, bits) >= 1)
      hi = mid;
    else
      lo = mid;
  }
  return (lo + hi) * half;
}

// Eigenvector of the tridiagonal for an isolated eigenvalue, by inverse
// iteration with a tridiagonal partial-pivot solver.
std::vector<Real> tridiag_eigenvector(const std::vector<Real>& alpha,
                                      const std::vector<Real>& beta,
                                      const Real& theta, mpfr_prec_t bits) {
  const int k = static_cast<int>(alpha.size());
  std::vector<Real> y(k, Real::of(1L, bits));
  Real shift = theta + Real::pow10(-(kEdDigits - 6), bits);
  for (int iter = 0; iter < 3; ++iter) {
    // Solve (T - shift) x = y by LU with partial pivoting on a copy.
    std::vector<Real> d(k, Real::of(0L, bits)), e(k, Real::of(0L, bits)),
        f(k, Real::of(0L, bits));
    for (int i = 0; i < k; ++i) {
      d[i] = alpha[i] - shift;
      if (i < k - 1) e[i] = beta[i];
    }
    // e[i]: super- and (symmetric) sub-diagonal; f: second superdiag fill-in.
    std::vector<Real> sub(k, Real::of(0L, bits));
    for (int i = 0; i < k - 1; ++i) sub[i] = beta[i];
    std::vector<Real> x = y;
    for (int i = 0; i < k - 1; ++i) {
      Real da = abs(d[i]), sa = abs(sub[i]);
      if (sa > da) {
        std::swap(d[i], sub[i]);
        Real t = e[i];
        e[i] = d[i + 1];
        d[i + 1] = t;
        if (i + 1 < k - 1) {
          f[i] = e[i + 1];
          e[i + 1].set_si(0);
        }
        Real tx = x[i];
        x[i] = x[i + 1];
        x[i + 1] = tx;
      }
      if (d[i].is_zero()) d[i] = Real::pow10(-2 * kEdDigits, bits);
      Real m = sub[i] / d[i];
      d[i + 1] -= m * e[i];
      if (i + 1 < k - 1 && !f[i].is_zero()) e[i + 1] -= m * f[i];
      x[i + 1] -= m * x[i];
    }
    if (d[k - 1].is_zero()) d[k - 1] = Real::pow10(-2 * kEdDigits, bits);
    // Back substitution.
    x[k - 1] /= d[k - 1];
    for (int i = k - 2; i >= 0; --i) {
      Real acc = x[i];
      acc -= e[i] * x[i + 1];
      if (i < k - 2 && !f[i].is_zero()) acc -= f[i] * x[i + 2];
      x[i] = acc / d[i];
    }
    Real nn = Real::of(0L, bits);
    for (const Real& xi : x) nn.addmul(xi, xi);
    nn = sqrt(nn);
    for (Real& xi : x) xi.div(nn);
    y = x;
  }
  return y;
}

// ---- Lanczos ---------------------------------------------------------------

struct LanczosResult {
  Real theta;
  CVec vector;
  Real residual;
};

LanczosResult lanczos_ground(
    const std::function<void(const CVec&, CVec&)>& apply, size_t dim,
    const std::vector<const CVec*>& deflate, unsigned seed) {
  const PrecisionContext& ctx = ed_context();
  const mpfr_prec_t bits = ctx.bits();
  const int max_k = static_cast<int>(std::min<size_t>(dim, 360));
  Real conv_tol = Real::pow10(-30, bits);

  std::vector<CVec> basis;
  std::vector<Real> alpha, beta;

  // Deterministic pseudo-random start vector.
  CVec v = zero_vec(dim, bits);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (auto& z : v) z.re.set_d(u(rng));
  orthogonalize(v, deflate);
  scale(v, Real::one(bits) / norm2(v));

  CVec w = zero_vec(dim, bits);
  Real theta(bits);
  std::vector<Real> ritz;
  for (int k = 0; k < max_k; ++k) {
    basis.push_back(v);
    apply(basis[k], w);
    // Full reorthogonalization against the Krylov basis and deflated states.
    std::vector<const CVec*> against = deflate;
    for (const auto& b : basis) against.push_back(&b);
    Complex a = inner(basis[k], w);
    alpha.push_back(a.re);
    orthogonalize(w, against);
    Real b = norm2(w);

    const bool exhausted =
        b < Real::pow10(-(kEdDigits - 8), bits) || k + 1 == max_k;
    const bool check = exhausted || (k >= 8 && k % 10 == 0);
    if (check) {
      theta = tridiag_smallest_eigenvalue(alpha, beta, bits);
      ritz = tridiag_eigenvector(alpha, beta, theta, bits);
      Real bound = b * abs(ritz[k]);
      if (exhausted || bound < conv_tol) {
        CVec ground = zero_vec(dim, bits);
        for (int i = 0; i <= k; ++i) {
          Complex c(bits);
          c.re.set(ritz[i]);
          for (size_t r = 0; r < dim; ++r) ground[r].addmul(c, basis[i][r]);
        }
        orthogonalize(ground, deflate);
        scale(ground, Real::one(bits) / norm2(ground));
        // True residual ||Hv - theta v||.
        apply(ground, w);
        Complex rq = inner(ground, w);
        for (size_t r = 0; r < dim; ++r) {
          w[r].re.submul(rq.re, ground[r].re);
          w[r].re.addmul(rq.im, ground[r].im);
          w[r].im.submul(rq.re, ground[r].im);
          w[r].im.submul(rq.im, ground[r].re);
        }
        Real resid = norm2(w);
        if (exhausted || resid < Real::pow10(-20, bits))
          return LanczosResult{rq.re, std::move(ground), std::move(resid)};
      }
    }
    if (b < Real::pow10(-(kEdDigits - 8), bits)) break;
    beta.push_back(b);
    scale(w, Real::one(bits) / b);
    v = w;
  }
  throw ConvergenceError("lanczos_ground failed to converge", "n/a");
}

// ---- basis operators ---------------------------------------------------------

// gamma_{2j} = (prod_{k<j} sz_k) sx_j ; gamma_{2j+1} = (prod_{k<j} sz_k) sy_j.
// Applies gamma_m: out[b ^ (1<<j)] += phase(b) * in[b].
void apply_majorana(int n, int m, const CVec& in, CVec& out) {
  const int j = m / 2;
  const bool is_y = (m % 2) != 0;
  const size_t dim = in.size();
  const size_t mask = size_t{1} << j;
  for (size_t b = 0; b < dim; ++b) {
    const Complex& src = in[b];
    if (src.re.is_zero() && src.im.is_zero()) continue;
    int string = __builtin_popcountll(b & (mask - 1));
    int sign = (string % 2 == 0) ? 1 : -1;
    Complex& dst = out[b ^ mask];
    if (!is_y) {
      if (sign > 0) {
        dst.re.add(src.re);
        dst.im.add(src.im);
      } else {
        dst.re.sub(src.re);
        dst.im.sub(src.im);
      }
    } else {
      // sy: factor i*(1-2 bit_j)
      int s = (b & mask) ? -sign : sign;
      if (s > 0) {  // dst += i*src
        dst.re.sub(src.im);
        dst.im.add(src.re);
      } else {
        dst.re.add(src.im);
        dst.im.sub(src.re);
      }
    }
  }
}

}  // namespace

// ---- public oracle entry points ----------------------------------------------

GroundManifold spin_ed_ground(const ChainSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  if (n > 14)
    throw DomainError("spin_ed_ground: N too large for dense oracle",
                      std::to_string(n));
  const PrecisionContext& ctx = ed_context();
  const mpfr_prec_t bits = ctx.bits();
  const size_t dim = size_t{1} << n;

  std::vector<Real> gval, jval;
  for (int j = 0; j < n; ++j) {
    gval.push_back(ctx.parse(spec.site_fields[j]));
    jval.push_back(ctx.parse(spec.bond_couplings[j]));
  }
  Real half = Real::of(0.5, bits);

  // Diagonal part: -(1/2) sum_j g_j sz_j.
  std::vector<Real> diag(dim, Real::of(0L, bits));
  for (size_t b = 0; b < dim; ++b)
    for (int j = 0; j < n; ++j) {
      Real t = gval[j] * half;
      if (b & (size_t{1} << j)) t.neg();
      diag[b].sub(t);
    }

  auto apply = [&](const CVec& in, CVec& out) {
    vec_set_zero(out);
    for (size_t b = 0; b < dim; ++b) {
      out[b].re.addmul(diag[b], in[b].re);
      out[b].im.addmul(diag[b], in[b].im);
    }
    for (int j = 0; j < n; ++j) {
      const int jp = (j + 1) % n;
      const size_t mask = (size_t{1} << j) | (size_t{1} << jp);
      const bool duality = spec.duality_bonds.count(j) > 0;
      for (size_t b = 0; b < dim; ++b) {
        const Complex& src = in[b];
        if (src.re.is_zero() && src.im.is_zero()) continue;
        Complex& dst = out[b ^ mask];
        if (!duality) {
          // -(J_j/2) sx_j sx_{j+1}
          Real c = jval[j] * half;
          dst.re.submul(c, src.re);
          dst.im.submul(c, src.im);
        } else {
          // -(1/2) sx_j sy_{j+1}: phase -i/2 * (1 - 2 bit_{j+1})
          int s = (b & (size_t{1} << jp)) ? -1 : 1;
          if (s > 0) {  // dst += -i/2 src
            dst.re.addmul(half, src.im);
            dst.im.submul(half, src.re);
          } else {
            dst.re.submul(half, src.im);
            dst.im.addmul(half, src.re);
          }
        }
      }
    }
  };

  // Ground state plus degenerate partners by deflation.
  GroundManifold out;
  std::vector<CVec> found;
  Real degen_tol = Real::pow10(-8, bits);
  for (int attempt = 0; attempt < 6; ++attempt) {
    std::vector<const CVec*> deflate;
    for (const auto& f : found) deflate.push_back(&f);
    LanczosResult r = lanczos_ground(apply, dim, deflate, 9001 + attempt);
    if (attempt == 0) {
      out.energy = r.theta;
      found.push_back(std::move(r.vector));
    } else if (r.theta <= out.energy + degen_tol) {
      found.push_back(std::move(r.vector));
    } else {
      break;
    }
  }

  // Parity-resolve the manifold: diagonalize P = prod sz within it.
  const int k = static_cast<int>(found.size());
  ComplexMatrix pmat(k, k, bits);
  for (int a = 0; a < k; ++a)
    for (int b2 = 0; b2 < k; ++b2) {
      Complex acc = Complex::zero(bits);
      for (size_t idx = 0; idx < dim; ++idx) {
        const int par = (__builtin_popcountll(idx) % 2 == 0) ? 1 : -1;
        if (par > 0)
          acc.addmul_conj(found[a][idx], found[b2][idx]);
        else {
          Complex t(bits);
          t.addmul_conj(found[a][idx], found[b2][idx]);
          acc.re.sub(t.re);
          acc.im.sub(t.im);
        }
      }
      pmat(a, b2) = acc;
    }
  EigenResult peig = hermitian_eigen(pmat, ctx, true);
  for (int c = 0; c < k; ++c) {
    CVec rotated = zero_vec(dim, bits);
    for (int a = 0; a < k; ++a) {
      Complex coef = peig.vectors(a, c);
      for (size_t idx = 0; idx < dim; ++idx)
        rotated[idx].addmul(coef, found[a][idx]);
    }
    scale(rotated, Real::one(bits) / norm2(rotated));
    DenseState st;
    st.n_sites = n;
    st.amplitudes = std::move(rotated);
    out.states.push_back(std::move(st));
    out.parities.push_back(peig.values[c].sign() >= 0 ? 1 : -1);
  }
  return out;
}

GroundManifold fermion_ed_ground(const SkewMatrix& s) {
  const int two_n = s.dim();
  if (two_n > 16)
    throw DomainError("fermion_ed_ground: dim too large for dense oracle",
                      std::to_string(two_n));
  const int n = two_n / 2;
  const PrecisionContext& ctx = ed_context();
  const mpfr_prec_t bits = ctx.bits();
  const size_t dim = size_t{1} << n;

  // Nonzero couplings of H = sum_{m<p} i S_mp gamma_m gamma_p.
  struct Pair {
    int m, p;
    Real coeff;
  };
  std::vector<Pair> pairs;
  Real zero_chk = Real::pow10(-2 * kEdDigits, bits);
  for (int m = 0; m < two_n; ++m)
    for (int p = m + 1; p < two_n; ++p) {
      Real c(bits);
      c.set(s.at(m, p));
      Real a = abs(c);
      if (a > zero_chk) pairs.push_back(Pair{m, p, std::move(c)});
    }

  CVec tmp1 = zero_vec(dim, bits), tmp2 = zero_vec(dim, bits);
  auto apply = [&](const CVec& in, CVec& out) {
    vec_set_zero(out);
    for (const Pair& pr : pairs) {
      vec_set_zero(tmp1);
      vec_set_zero(tmp2);
      apply_majorana(n, pr.p, in, tmp1);
      apply_majorana(n, pr.m, tmp1, tmp2);
      // out += i*coeff * tmp2
      for (size_t b = 0; b < dim; ++b) {
        out[b].re.submul(pr.coeff, tmp2[b].im);
        out[b].im.addmul(pr.coeff, tmp2[b].re);
      }
    }
  };

  GroundManifold out;
  std::vector<CVec> found;
  Real degen_tol = Real::pow10(-8, bits);
  for (int attempt = 0; attempt < 6; ++attempt) {
    std::vector<const CVec*> deflate;
    for (const auto& f : found) deflate.push_back(&f);
    LanczosResult r = lanczos_ground(apply, dim, deflate, 7707 + attempt);
    if (attempt == 0) {
      out.energy = r.theta;
      found.push_back(std::move(r.vector));
    } else if (r.theta <= out.energy + degen_tol) {
      found.push_back(std::move(r.vector));
    } else {
      break;
    }
  }

  const int k = static_cast<int>(found.size());
  ComplexMatrix pmat(k, k, bits);
  for (int a = 0; a < k; ++a)
    for (int b2 = 0; b2 < k; ++b2) {
      Complex acc = Complex::zero(bits);
      for (size_t idx = 0; idx < dim; ++idx) {
        const int par = (__builtin_popcountll(idx) % 2 == 0) ? 1 : -1;
        Complex t(bits);
        t.addmul_conj(found[a][idx], found[b2][idx]);
        if (par > 0) {
          acc.re.add(t.re);
          acc.im.add(t.im);
        } else {
          acc.re.sub(t.re);
          acc.im.sub(t.im);
        }
      }
      pmat(a, b2) = acc;
    }
  EigenResult peig = hermitian_eigen(pmat, ctx, true);
  for (int c = 0; c < k; ++c) {
    CVec rotated = zero_vec(dim, bits);
    for (int a = 0; a < k; ++a) {
      Complex coef = peig.vectors(a, c);
      for (size_t idx = 0; idx < dim; ++idx)
        rotated[idx].addmul(coef, found[a][idx]);
    }
    scale(rotated, Real::one(bits) / norm2(rotated));
    DenseState st;
    st.n_sites = n;
    st.amplitudes = std::move(rotated);
    out.states.push_back(std::move(st));
    out.parities.push_back(peig.values[c].sign() >= 0 ? 1 : -1);
  }
  return out;
}

std::vector<Real> rdm_spectrum(const DenseState& state,
                               const SubsystemSpec& region) {
  const PrecisionContext& ctx = ed_context();
  const mpfr_prec_t bits = ctx.bits();
  const int n = state.n_sites;
  const int la = region.length;
  if (la < 1 || la >= n)
    throw DomainError("rdm_spectrum: region length out of range",
                      std::to_string(la));
  std::vector<int> in_region(n, 0);
  for (int i = 0; i < la; ++i) in_region[(region.start + i) % n] = 1;

  std::vector<int> asites, esites;
  for (int j = 0; j < n; ++j)
    (in_region[j] ? asites : esites).push_back(j);

  const size_t da = size_t{1} << la;
  const size_t de = size_t{1} << (n - la);
  ComplexMatrix m(static_cast<int>(da), static_cast<int>(de), bits);
  for (size_t b = 0; b < state.amplitudes.size(); ++b) {
    size_t ai = 0, ei = 0;
    for (size_t t = 0; t < asites.size(); ++t)
      if (b & (size_t{1} << asites[t])) ai |= size_t{1} << t;
    for (size_t t = 0; t < esites.size(); ++t)
      if (b & (size_t{1} << esites[t])) ei |= size_t{1} << t;
    m(static_cast<int>(ai), static_cast<int>(ei)).set(state.amplitudes[b]);
  }
  // rho_A = M M^dagger.
  ComplexMatrix rho(static_cast<int>(da), static_cast<int>(da), bits);
  for (size_t i = 0; i < da; ++i)
    for (size_t j = 0; j < da; ++j) {
      Complex& acc = rho(static_cast<int>(i), static_cast<int>(j));
      for (size_t e = 0; e < de; ++e) {
        // m(i,e) * conj(m(j,e))
        const Complex& x = m(static_cast<int>(i), static_cast<int>(e));
        const Complex& y = m(static_cast<int>(j), static_cast<int>(e));
        acc.re.addmul(x.re, y.re);
        acc.re.addmul(x.im, y.im);
        acc.im.addmul(x.im, y.re);
        acc.im.submul(x.re, y.im);
      }
    }
  EigenResult eig = hermitian_eigen(rho, ctx, false);
  std::vector<Real> weights(eig.values.rbegin(), eig.values.rend());
  for (Real& w : weights)
    if (w.sign() < 0) w.set_si(0);
  return weights;
}

SkewMatrix covariance_of_state(const DenseState& state) {
  const PrecisionContext& ctx = ed_context();
  const mpfr_prec_t bits = ctx.bits();
  const int n = state.n_sites;
  const int two_n = 2 * n;
  const size_t dim = state.amplitudes.size();

  std::vector<CVec> gv;
  gv.reserve(two_n);
  for (int m = 0; m < two_n; ++m) {
    CVec w = zero_vec(dim, bits);
    apply_majorana(n, m, state.amplitudes, w);
    gv.push_back(std::move(w));
  }
  SkewMatrix gamma(two_n, bits);
  for (int a = 0; a < two_n; ++a)
    for (int b = a + 1; b < two_n; ++b) {
      // <psi| gamma_a gamma_b |psi> = <gamma_a psi, gamma_b psi>
      Complex g = inner(gv[a], gv[b]);
      gamma.set(a, b, g.im);
    }
  return gamma;
}

int parity_of_state(const DenseState& state) {
  const mpfr_prec_t bits = ed_context().bits();
  Real acc = Real::of(0L, bits);
  for (size_t b = 0; b < state.amplitudes.size(); ++b) {
    Real w = state.amplitudes[b].abs2();
    if (__builtin_popcountll(b) % 2 == 0)
      acc.add(w);
    else
      acc.sub(w);
  }
  return acc.sign() >= 0 ? 1 : -1;
}

// ---- dense oracle machinery ---------------------------------------------------

ComplexMatrix dense_majorana(int n_modes, int m) {
  const mpfr_prec_t bits = ed_context().bits();
  const size_t dim = size_t{1} << n_modes;
  ComplexMatrix out(static_cast<int>(dim), static_cast<int>(dim), bits);
  CVec e = zero_vec(dim, bits), w = zero_vec(dim, bits);
  for (size_t c = 0; c < dim; ++c) {
    vec_set_zero(e);
    e[c].re.set_si(1);
    vec_set_zero(w);
    apply_majorana(n_modes, m, e, w);
    for (size_t r = 0; r < dim; ++r)
      out(static_cast<int>(r), static_cast<int>(c)).set(w[r]);
  }
  return out;
}

ComplexMatrix dense_quadratic_operator(const SkewMatrix& s) {
  const int two_n = s.dim();
  const int n = two_n / 2;
  const PrecisionContext& ctx = ed_context();
  const mpfr_prec_t bits = ctx.bits();
  const size_t dim = size_t{1} << n;
  ComplexMatrix h(static_cast<int>(dim), static_cast<int>(dim), bits);
  CVec e = zero_vec(dim, bits), t1 = zero_vec(dim, bits),
       t2 = zero_vec(dim, bits);
  for (size_t c = 0; c < dim; ++c) {
    vec_set_zero(e);
    e[c].re.set_si(1);
    for (int m = 0; m < two_n; ++m)
      for (int p = m + 1; p < two_n; ++p) {
        if (s.at(m, p).is_zero()) continue;
        vec_set_zero(t1);
        vec_set_zero(t2);
        apply_majorana(n, p, e, t1);
        apply_majorana(n, m, t1, t2);
        for (size_t r = 0; r < dim; ++r) {
          h(static_cast<int>(r), static_cast<int>(c))
              .re.submul(s.at(m, p), t2[r].im);
          h(static_cast<int>(r), static_cast<int>(c))
              .im.addmul(s.at(m, p), t2[r].re);
        }
      }
  }
  return h;
}

SkewMatrix covariance_of_density(const ComplexMatrix& rho, int n_modes) {
  const PrecisionContext& ctx = ed_context();
  const mpfr_prec_t bits = ctx.bits();
  const int two_n = 2 * n_modes;
  std::vector<ComplexMatrix> g;
  g.reserve(two_n);
  for (int m = 0; m < two_n; ++m) g.push_back(dense_majorana(n_modes, m));
  SkewMatrix gamma(two_n, bits);
  const int dim = rho.rows();
  for (int a = 0; a < two_n; ++a)
    for (int b = a + 1; b < two_n; ++b) {
      // Tr(rho gamma_a gamma_b), imaginary part.
      Complex tr = Complex::zero(bits);
      for (int r = 0; r < dim; ++r)
        for (int k = 0; k < dim; ++k) {
          // (rho * g_a)(r,k) * g_b(k,r)
          Complex t(bits);
          for (int q = 0; q < dim; ++q) t.addmul(rho(r, q), g[a](q, k));
          tr.addmul(t, g[b](k, r));
        }
      gamma.set(a, b, tr.im);
    }
  return gamma;
}

Real dense_negativity(const ComplexMatrix& rho, int n_modes, int cut_modes) {
  if (n_modes > 6)
    throw DomainError("dense_negativity: too many modes for the dense oracle",
                      std::to_string(n_modes));
  if (cut_modes < 1 || cut_modes >= n_modes)
    throw DomainError("dense_negativity: cut out of range",
                      std::to_string(cut_modes));
  const PrecisionContext& ctx = ed_context();
  const mpfr_prec_t bits = ctx.bits();
  const int two_n = 2 * n_modes;
  const int dim = rho.rows();

  std::vector<ComplexMatrix> g;
  g.reserve(two_n);
  for (int m = 0; m < two_n; ++m) g.push_back(dense_majorana(n_modes, m));

  ComplexMatrix transformed(dim, dim, bits);
  Real inv_dim = Real::one(bits) / Real::of(static_cast<long>(dim), bits);

  // Enumerate all 4^n Majorana monomials gamma^a (indices ascending).
  const size_t n_monomials = size_t{1} << two_n;
  for (size_t a = 0; a < n_monomials; ++a) {
    // Build the monomial matrix.
    ComplexMatrix mono = ComplexMatrix::identity(dim, bits);
    int left_count = 0;
    for (int m = 0; m < two_n; ++m) {
      if (!(a & (size_t{1} << m))) continue;
      mono = mul(mono, g[m]);
      if (m < 2 * cut_modes) ++left_count;
    }
    // Coefficient c_a = Tr(mono^dagger rho) / 2^n.
    Complex c = Complex::zero(bits);
    for (int r = 0; r < dim; ++r)
      for (int k = 0; k < dim; ++k) {
        // conj(mono(k,r)) * rho(k,r)
        c.re.addmul(mono(k, r).re, rho(k, r).re);
        c.re.addmul(mono(k, r).im, rho(k, r).im);
        c.im.addmul(mono(k, r).re, rho(k, r).im);
        c.im.submul(mono(k, r).im, rho(k, r).re);
      }
    c.re.mul(inv_dim);
    c.im.mul(inv_dim);
    // Partial time reversal: multiply by i^{left_count}.
    switch (left_count % 4) {
      case 0:
        break;
      case 1: {
        Real t = c.re;
        c.re = -c.im;
        c.im = t;
        break;
      }
      case 2:
        c.re.neg();
        c.im.neg();
        break;
      case 3: {
        Real t = c.re;
        c.re = c.im;
        c.im = -t;
        break;
      }
    }
    for (int r = 0; r < dim; ++r)
      for (int k = 0; k < dim; ++k) transformed(r, k).addmul(c, mono(r, k));
  }

  // Tr|X| = sum of singular values = sum sqrt(eig(X^dagger X)).
  ComplexMatrix xdx(dim, dim, bits);
  for (int r = 0; r < dim; ++r)
    for (int k = 0; k < dim; ++k) {
      Complex& acc = xdx(r, k);
      for (int q = 0; q < dim; ++q) {
        // conj(X(q,r)) * X(q,k)
        acc.addmul_conj(transformed(q, r), transformed(q, k));
      }
    }
  EigenResult eig = hermitian_eigen(xdx, ctx, false);
  Real trace_norm = Real::of(0L, bits);
  for (Real& lam : eig.values) {
    if (lam.sign() < 0) lam.set_si(0);
    trace_norm += sqrt(lam);
  }
  return log(trace_norm);
}

Real dense_fidelity(const ComplexMatrix& rho1, const ComplexMatrix& rho2) {
  const PrecisionContext& ctx = ed_context();
  auto clamped_sqrt = [](const Real& x) {
    if (x.sign() < 0) return Real::of(0L, x.prec());
    return sqrt(x);
  };
  ComplexMatrix s1 = matrix_function(rho1, clamped_sqrt, ctx);
  ComplexMatrix inner_m = mul(s1, mul(rho2, s1));
  EigenResult eig = hermitian_eigen(inner_m, ctx, false);
  Real f = Real::of(0L, ctx.bits());
  for (Real& lam : eig.values) {
    if (lam.sign() < 0) lam.set_si(0);
    f += sqrt(lam);
  }
  return f;
}

}  // namespace ehwb
