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

#ifndef EHWB_MATRIX_HPP_
#define EHWB_MATRIX_HPP_

#include <vector>

#include "ehwb/errors.hpp"
#include "ehwb/precision.hpp"

namespace ehwb {

// Dense row-major real matrix. All entries share one precision, fixed at
// construction.
class RealMatrix {
 public:
  RealMatrix() : rows_(0), cols_(0), bits_(53) {}

  RealMatrix(int rows, int cols, mpfr_prec_t bits)
      : rows_(rows), cols_(cols), bits_(bits) {
    data_.assign(static_cast<size_t>(rows) * cols, Real::of(0L, bits));
  }

  static RealMatrix identity(int n, mpfr_prec_t bits) {
    RealMatrix m(n, n, bits);
    for (int i = 0; i < n; ++i) m(i, i).set_si(1);
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  mpfr_prec_t bits() const { return bits_; }

  Real& operator()(int i, int j) {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }
  const Real& operator()(int i, int j) const {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }

  // max_{ij} |m_ij|
  Real max_abs() const {
    Real m = Real::of(0L, bits_);
    Real t(bits_);
    for (const Real& x : data_) {
      t.set(x);
      t.abs_inplace();
      if (t > m) m.set(t);
    }
    return m;
  }

  RealMatrix transposed() const {
    RealMatrix t(cols_, rows_, bits_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

 private:
  int rows_, cols_;
  mpfr_prec_t bits_;
  std::vector<Real> data_;
};

// Dense row-major complex matrix.
class ComplexMatrix {
 public:
  ComplexMatrix() : rows_(0), cols_(0), bits_(53) {}

  ComplexMatrix(int rows, int cols, mpfr_prec_t bits)
      : rows_(rows), cols_(cols), bits_(bits) {
    data_.assign(static_cast<size_t>(rows) * cols, Complex::zero(bits));
  }

  static ComplexMatrix identity(int n, mpfr_prec_t bits) {
    ComplexMatrix m(n, n, bits);
    for (int i = 0; i < n; ++i) m(i, i).re.set_si(1);
    return m;
  }

  // M = re + i*im. Either part may be empty (treated as zero).
  static ComplexMatrix from_parts(const RealMatrix* re, const RealMatrix* im,
                                  mpfr_prec_t bits) {
    const RealMatrix* any = re ? re : im;
    ComplexMatrix m(any->rows(), any->cols(), bits);
    for (int i = 0; i < m.rows_; ++i)
      for (int j = 0; j < m.cols_; ++j) {
        if (re) m(i, j).re.set((*re)(i, j));
        if (im) m(i, j).im.set((*im)(i, j));
      }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  mpfr_prec_t bits() const { return bits_; }

  Complex& operator()(int i, int j) {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }
  const Complex& operator()(int i, int j) const {
    return data_[static_cast<size_t>(i) * cols_ + j];
  }

  Real max_abs() const {
    Real m = Real::of(0L, bits_);
    Real t(bits_);
    for (const Complex& z : data_) {
      t.set(z.re);
      t.abs_inplace();
      if (t > m) m.set(t);
      t.set(z.im);
      t.abs_inplace();
      if (t > m) m.set(t);
    }
    return m;
  }

  // Largest |imaginary part| over all entries; used to certify results
  // that must come out real.
  Real max_abs_imag() const {
    Real m = Real::of(0L, bits_);
    Real t(bits_);
    for (const Complex& z : data_) {
      t.set(z.im);
      t.abs_inplace();
      if (t > m) m.set(t);
    }
    return m;
  }

  RealMatrix real_part() const {
    RealMatrix r(rows_, cols_, bits_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(i, j).set((*this)(i, j).re);
    return r;
  }

  RealMatrix imag_part() const {
    RealMatrix r(rows_, cols_, bits_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r(i, j).set((*this)(i, j).im);
    return r;
  }

 private:
  int rows_, cols_;
  mpfr_prec_t bits_;
  std::vector<Complex> data_;
};

// Real skew-symmetric matrix of even dimension. Antisymmetry is exact by
// construction: the setter writes both triangles, the diagonal stays zero.
class SkewMatrix {
 public:
  SkewMatrix() = default;

  SkewMatrix(int dim, mpfr_prec_t bits) : m_(dim, dim, bits) {
    if (dim <= 0 || dim % 2 != 0)
      throw DomainError("skew matrix dimension must be positive and even",
                        std::to_string(dim));
  }

  int dim() const { return m_.rows(); }
  mpfr_prec_t bits() const { return m_.bits(); }

  const Real& at(int i, int j) const { return m_(i, j); }

  void set(int i, int j, const Real& v) {
    if (i == j) {
      if (!v.is_zero())
        throw DomainError("skew matrix diagonal must stay zero",
                          std::to_string(i));
      return;
    }
    m_(i, j).set(v);
    m_(j, i).set(v);
    m_(j, i).neg();
  }

  void add_at(int i, int j, const Real& v) {
    if (i == j) return;
    m_(i, j).add(v);
    m_(j, i).sub(v);
  }

  const RealMatrix& dense() const { return m_; }
  RealMatrix& dense_mutable() { return m_; }

  // Wraps an existing matrix, symmetrizing exactly: out(i,j) = (a_ij - a_ji)/2.
  static SkewMatrix from_dense(const RealMatrix& a) {
    SkewMatrix s(a.rows(), a.bits());
    Real half = Real::of(0.5, a.bits());
    Real t(a.bits());
    for (int i = 0; i < a.rows(); ++i)
      for (int j = i + 1; j < a.cols(); ++j) {
        t.assign_sub(a(i, j), a(j, i));
        t.mul(half);
        s.set(i, j, t);
      }
    return s;
  }

 private:
  RealMatrix m_;
};

// ---- dense products ------------------------------------------------------

inline RealMatrix mul(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix c(a.rows(), b.cols(), a.bits());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      Real& acc = c(i, j);
      for (int k = 0; k < a.cols(); ++k) acc.addmul(a(i, k), b(k, j));
    }
  return c;
}

inline ComplexMatrix mul(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows(), b.cols(), a.bits());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      Complex& acc = c(i, j);
      for (int k = 0; k < a.cols(); ++k) acc.addmul(a(i, k), b(k, j));
    }
  return c;
}

// a^T * b * a for real matrices (b square).
inline RealMatrix congruence(const RealMatrix& a, const RealMatrix& b) {
  return mul(a.transposed(), mul(b, a));
}

}  // namespace ehwb

#endif  // EHWB_MATRIX_HPP_
