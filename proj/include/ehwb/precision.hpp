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

#ifndef EHWB_PRECISION_HPP_
#define EHWB_PRECISION_HPP_

#include <mpfr.h>

#include <cmath>
#include <string>
#include <utility>

#include "ehwb/errors.hpp"

namespace ehwb {

// Arbitrary-precision real number. Thin RAII wrapper around mpfr_t with
// round-to-nearest everywhere. Every value carries its own precision;
// binary operators produce results at the wider operand precision.
class Real {
 public:
  Real() : Real(static_cast<mpfr_prec_t>(53)) {}

  explicit Real(mpfr_prec_t bits) {
    mpfr_init2(v_, bits);
    mpfr_set_nan(v_);
  }

  Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }

  Real(Real&& o) noexcept {
    v_[0] = o.v_[0];
    mpfr_init2(o.v_, 53);  // leave source in a destructible state
  }

  Real& operator=(const Real& o) {
    if (this != &o) {
      mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }

  Real& operator=(Real&& o) noexcept {
    if (this != &o) mpfr_swap(v_, o.v_);
    return *this;
  }

  ~Real() { mpfr_clear(v_); }

  static Real of(double x, mpfr_prec_t bits) {
    Real r(bits);
    mpfr_set_d(r.v_, x, MPFR_RNDN);
    return r;
  }

  static Real of(long x, mpfr_prec_t bits) {
    Real r(bits);
    mpfr_set_si(r.v_, x, MPFR_RNDN);
    return r;
  }

  // Parses a decimal string. Throws DomainError on malformed input.
  static Real parse(const std::string& s, mpfr_prec_t bits) {
    Real r(bits);
    if (mpfr_set_str(r.v_, s.c_str(), 10, MPFR_RNDN) != 0)
      throw DomainError("not a decimal number", s);
    return r;
  }

  static Real zero(mpfr_prec_t bits) { return of(0L, bits); }
  static Real one(mpfr_prec_t bits) { return of(1L, bits); }

  static Real pi(mpfr_prec_t bits) {
    Real r(bits);
    mpfr_const_pi(r.v_, MPFR_RNDN);
    return r;
  }

  // 10^e at the given precision.
  static Real pow10(long e, mpfr_prec_t bits) {
    Real r(bits);
    mpfr_set_si(r.v_, 10, MPFR_RNDN);
    mpfr_pow_si(r.v_, r.v_, e, MPFR_RNDN);
    return r;
  }

  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

  // Scientific-notation decimal string with `digits` significant digits.
  std::string str(long digits) const {
    char* s = nullptr;
    if (mpfr_asprintf(&s, "%.*Re", static_cast<int>(digits - 1), v_) < 0)
      return "<fmt-error>";
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

  bool is_nan() const { return mpfr_nan_p(v_) != 0; }
  bool is_inf() const { return mpfr_inf_p(v_) != 0; }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }

  // In-place arithmetic. These keep the target's precision.
  void set(const Real& a) { mpfr_set(v_, a.v_, MPFR_RNDN); }
  void set_d(double x) { mpfr_set_d(v_, x, MPFR_RNDN); }
  void set_si(long x) { mpfr_set_si(v_, x, MPFR_RNDN); }
  void set_inf(int sign) { mpfr_set_inf(v_, sign); }
  void add(const Real& a) { mpfr_add(v_, v_, a.v_, MPFR_RNDN); }
  void sub(const Real& a) { mpfr_sub(v_, v_, a.v_, MPFR_RNDN); }
  void mul(const Real& a) { mpfr_mul(v_, v_, a.v_, MPFR_RNDN); }
  void div(const Real& a) { mpfr_div(v_, v_, a.v_, MPFR_RNDN); }
  void neg() { mpfr_neg(v_, v_, MPFR_RNDN); }
  void abs_inplace() { mpfr_abs(v_, v_, MPFR_RNDN); }
  // v += a*b and v -= a*b; the workhorses of the matrix kernels.
  void addmul(const Real& a, const Real& b) {
    mpfr_fma(v_, a.v_, b.v_, v_, MPFR_RNDN);
  }
  void submul(const Real& a, const Real& b) {
    mpfr_fms(v_, a.v_, b.v_, v_, MPFR_RNDN);
    mpfr_neg(v_, v_, MPFR_RNDN);
  }
  // v = a*b and v = a/b without temporaries.
  void assign_mul(const Real& a, const Real& b) {
    mpfr_mul(v_, a.v_, b.v_, MPFR_RNDN);
  }
  void assign_div(const Real& a, const Real& b) {
    mpfr_div(v_, a.v_, b.v_, MPFR_RNDN);
  }
  void assign_add(const Real& a, const Real& b) {
    mpfr_add(v_, a.v_, b.v_, MPFR_RNDN);
  }
  void assign_sub(const Real& a, const Real& b) {
    mpfr_sub(v_, a.v_, b.v_, MPFR_RNDN);
  }

  Real& operator+=(const Real& a) { add(a); return *this; }
  Real& operator-=(const Real& a) { sub(a); return *this; }
  Real& operator*=(const Real& a) { mul(a); return *this; }
  Real& operator/=(const Real& a) { div(a); return *this; }

  friend Real operator+(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator-(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator*(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator/(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real operator-(const Real& a) {
    Real r(a);
    r.neg();
    return r;
  }

  friend bool operator<(const Real& a, const Real& b) {
    return mpfr_less_p(a.v_, b.v_) != 0;
  }
  friend bool operator>(const Real& a, const Real& b) {
    return mpfr_greater_p(a.v_, b.v_) != 0;
  }
  friend bool operator<=(const Real& a, const Real& b) {
    return mpfr_lessequal_p(a.v_, b.v_) != 0;
  }
  friend bool operator>=(const Real& a, const Real& b) {
    return mpfr_greaterequal_p(a.v_, b.v_) != 0;
  }
  friend bool operator==(const Real& a, const Real& b) {
    return mpfr_equal_p(a.v_, b.v_) != 0;
  }

  friend Real abs(const Real& a) {
    Real r(a);
    r.abs_inplace();
    return r;
  }
  friend Real sqrt(const Real& a) {
    Real r(a.prec());
    mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real log(const Real& a) {
    Real r(a.prec());
    mpfr_log(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real log1p(const Real& a) {
    Real r(a.prec());
    mpfr_log1p(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real exp(const Real& a) {
    Real r(a.prec());
    mpfr_exp(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real pow(const Real& a, const Real& b) {
    Real r(wider(a, b));
    mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN);
    return r;
  }
  friend Real sin(const Real& a) {
    Real r(a.prec());
    mpfr_sin(r.v_, a.v_, MPFR_RNDN);
    return r;
  }
  friend Real max(const Real& a, const Real& b) { return a >= b ? a : b; }
  friend Real min(const Real& a, const Real& b) { return a <= b ? a : b; }

 private:
  static mpfr_prec_t wider(const Real& a, const Real& b) {
    mpfr_prec_t pa = mpfr_get_prec(a.v_), pb = mpfr_get_prec(b.v_);
    return pa > pb ? pa : pb;
  }

  mpfr_t v_;
};

// Working precision plus the tolerances the pipeline derives from it.
// Immutable after construction; safe to share between threads.
class PrecisionContext {
 public:
  explicit PrecisionContext(long decimal_digits)
      : digits_(decimal_digits),
        bits_(bits_for(decimal_digits)),
        purity_tol_(Real::pow10(-(decimal_digits - 10), bits_for(decimal_digits))),
        convergence_tol_(
            Real::pow10(-(decimal_digits - 5), bits_for(decimal_digits))) {
    if (decimal_digits < 30)
      throw DomainError("decimal_digits must be >= 30",
                        std::to_string(decimal_digits));
  }

  static mpfr_prec_t bits_for(long decimal_digits) {
    return static_cast<mpfr_prec_t>(
        std::ceil(static_cast<double>(decimal_digits) * 3.3219280948873623) +
        16);
  }

  long digits() const { return digits_; }
  mpfr_prec_t bits() const { return bits_; }
  const Real& purity_tol() const { return purity_tol_; }
  const Real& convergence_tol() const { return convergence_tol_; }

  Real make(double x = 0.0) const { return Real::of(x, bits_); }
  Real make_int(long x) const { return Real::of(x, bits_); }
  Real parse(const std::string& s) const { return Real::parse(s, bits_); }
  Real eps(long shift) const { return Real::pow10(-(digits_ + shift), bits_); }

 private:
  long digits_;
  mpfr_prec_t bits_;
  Real purity_tol_;
  Real convergence_tol_;
};

// Complex value over Real. Kept as a plain pair so the kernels can use
// in-place mpfr primitives on the parts.
struct Complex {
  Real re, im;

  Complex() = default;
  explicit Complex(mpfr_prec_t bits) : re(bits), im(bits) {}
  Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}

  static Complex zero(mpfr_prec_t bits) {
    return Complex(Real::of(0L, bits), Real::of(0L, bits));
  }

  void set_zero() {
    re.set_si(0);
    im.set_si(0);
  }
  void set(const Complex& a) {
    re.set(a.re);
    im.set(a.im);
  }
  void conj_inplace() { im.neg(); }
  // this += a*b (4 real fma).
  void addmul(const Complex& a, const Complex& b) {
    re.addmul(a.re, b.re);
    re.submul(a.im, b.im);
    im.addmul(a.re, b.im);
    im.addmul(a.im, b.re);
  }
  // this += conj(a)*b.
  void addmul_conj(const Complex& a, const Complex& b) {
    re.addmul(a.re, b.re);
    re.addmul(a.im, b.im);
    im.addmul(a.re, b.im);
    im.submul(a.im, b.re);
  }
  // this += a*s for real s.
  void addmul_real(const Complex& a, const Real& s) {
    re.addmul(a.re, s);
    im.addmul(a.im, s);
  }

  Real abs2() const {
    Real r(re.prec());
    r.assign_mul(re, re);
    r.addmul(im, im);
    return r;
  }
  Real abs() const { return sqrt(abs2()); }
};

}  // namespace ehwb

#endif  // EHWB_PRECISION_HPP_
