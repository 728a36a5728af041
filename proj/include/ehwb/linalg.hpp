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

#ifndef EHWB_LINALG_HPP_
#define EHWB_LINALG_HPP_

#include <functional>
#include <vector>

#include "ehwb/matrix.hpp"
#include "ehwb/precision.hpp"

namespace ehwb {

struct EigenResult {
  std::vector<Real> values;  // ascending
  ComplexMatrix vectors;     // unitary columns, empty if not requested
  bool has_vectors = false;
};

// Cyclic complex Jacobi for Hermitian matrices. Deterministic: fixed sweep
// order, no randomization. Throws ConvergenceError after 30 sweeps.
EigenResult hermitian_eigen(const ComplexMatrix& m, const PrecisionContext& ctx,
                            bool with_vectors = true);

// Same solver, input given as M = sym + i*skew.
EigenResult hermitian_eigen(const RealMatrix& sym_part,
                            const RealMatrix& skew_part,
                            const PrecisionContext& ctx,
                            bool with_vectors = true);

struct SymmetricEigenResult {
  std::vector<Real> values;  // ascending
  RealMatrix vectors;        // orthogonal columns, empty if not requested
  bool has_vectors = false;
};

// Real Jacobi for symmetric matrices.
SymmetricEigenResult symmetric_eigen(const RealMatrix& m,
                                     const PrecisionContext& ctx,
                                     bool with_vectors = true);

// Canonical form of a real skew-symmetric matrix: S = U B U^T with B the
// direct sum of [[0,-eps],[eps,0]] blocks, eps_i >= 0 descending. Column
// orientation of each block is fixed (first significant component of the
// block's first column is positive), so the output is deterministic.
struct SchurForm {
  RealMatrix rotation;            // U
  std::vector<Real> block_values; // eps_i, dim/2 entries, descending
};

SchurForm skew_schur(const SkewMatrix& s, const PrecisionContext& ctx);

struct Inversion {
  RealMatrix inverse;
  Real log_abs_det;
  int det_sign;  // +1 / -1; elimination aborts before producing 0
};

// Full-pivot Gauss-Jordan. `refine` runs one Newton correction pass
// X <- X(2 - MX) on the result. Throws SingularMatrixError when a pivot
// falls below 10^-(digits-5).
Inversion invert(const RealMatrix& m, const PrecisionContext& ctx,
                 bool refine = true);

ComplexMatrix invert(const ComplexMatrix& m, const PrecisionContext& ctx,
                     bool refine = true);

// f applied to a Hermitian matrix through its eigendecomposition:
// V diag(f(lambda)) V^dagger. f receives eigenvalues at working precision
// and must return NaN outside its domain (mapped to DomainError).
ComplexMatrix matrix_function(const ComplexMatrix& hermitian,
                              const std::function<Real(const Real&)>& f,
                              const PrecisionContext& ctx);

// Dilogarithm Li_2(x) for x in [-1, 1]: power series for |x| <= 1/2,
// reflection on (1/2, 1], Landen transform on [-1, -1/2).
Real dilog(const Real& x, const PrecisionContext& ctx);

// Y with iY = sign(iS), by the scaled Newton iteration
// Y <- (mu*Y - Y^{-1}/mu)/2 in purely real arithmetic. Requires S
// nonsingular; propagates SingularMatrixError otherwise.
RealMatrix skew_sign(const SkewMatrix& s, const PrecisionContext& ctx);

// Orthonormal basis (columns) of the null space of S, detected by
// full-pivot elimination with the given pivot threshold. May be 0 columns.
RealMatrix skew_null_basis(const SkewMatrix& s, const Real& threshold,
                           const PrecisionContext& ctx);

// Orthonormal completion: given q (n x k, orthonormal columns), returns
// n x (n-k) spanning the orthogonal complement, via Householder QR.
RealMatrix orthonormal_complement(const RealMatrix& q,
                                  const PrecisionContext& ctx);

// Canonical pairing of an even-dimensional subspace: projects standard
// basis vectors onto span(basis) in index order and orthonormalizes.
// The result depends only on the subspace, not on the input basis.
RealMatrix canonical_subspace_basis(const RealMatrix& basis,
                                    const PrecisionContext& ctx);

// Sign of the Pfaffian of S (Parlett-Reid style elimination with pivoting).
// For a pure Gaussian state with covariance S this is the fermion parity.
int pfaffian_sign(const SkewMatrix& s, const PrecisionContext& ctx);

}  // namespace ehwb

#endif  // EHWB_LINALG_HPP_
