#pragma once

// Core numeric kernels: eigendecomposition with a canonical eigenvalue order,
// tolerance-based rank, matrix exponential/logarithm, Kronecker products and
// the length-L DFT of a matrix sequence.

#include <cstddef>
#include <vector>

#include "obskit/matrix.hpp"

namespace obskit {

struct Eigendecomposition {
  ComplexMatrix v;             // eigenvectors as columns, unit 2-norm
  std::vector<cplx> lambdas;   // sorted: |.| descending, then arg descending
  ComplexMatrix v_inv;
  double residual;             // ||V diag(lambda) V^-1 - M||_F / ||M||_F
};

struct SvdRank {
  std::size_t rank;
  double sigma_max;
  double sigma_min;            // smallest singular value overall, not above-tol
  double tol_used;
  std::vector<double> singular_values;  // descending
};

// Canonical spectrum order: modulus descending, then argument descending.
// Moduli within 1e-10 (relative to the largest) count as tied, so rounding
// noise never decides the order.
void sort_spectrum(std::vector<cplx>& lambdas);

// Residual gate: reconstruction error above 1e-8 (relative) throws
// DecompositionFailed.
Eigendecomposition eig(const ComplexMatrix& m);

// rank = #{sigma_i > tol * sigma_max}.
SvdRank rank_with_tol(const ComplexMatrix& m, double tol);

double smallest_singular_value(const ComplexMatrix& m);
double operator_norm(const ComplexMatrix& m);  // largest singular value

ComplexMatrix mat_exp(const ComplexMatrix& m);
// Principal branch; SingularInput on a (numerically) singular argument,
// BranchCut when an eigenvalue sits on the closed negative real axis.
ComplexMatrix mat_log(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Entrywise DFT over the sequence index: out[j] = sum_k in[k] e^{-2pi i jk/L}.
// ks must hold exactly big_l same-shaped entries.
std::vector<ComplexMatrix> dft_sequence(const std::vector<ComplexMatrix>& ks,
                                        std::size_t big_l);

// Solve A X = B for square A (LU with full pivoting); SingularInput when A is
// rank-deficient at the pivot threshold.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix inverse(const ComplexMatrix& a);

std::vector<cplx> eigenvalues_only(const ComplexMatrix& m);

// Real eigenvalues of a Hermitian matrix, ascending.  The Hermitian part is
// what gets decomposed; callers pass matrices Hermitian by construction.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

struct HermitianEig {
  ComplexMatrix q;              // orthonormal eigenvectors as columns
  std::vector<double> lambdas;  // ascending
};

HermitianEig hermitian_eig(const ComplexMatrix& m);

struct SvdFactors {
  ComplexMatrix u;            // thin left factor
  std::vector<double> sigma;  // descending
  ComplexMatrix v;            // thin right factor, M = U diag(sigma) V^H
};

SvdFactors svd_decompose(const ComplexMatrix& m);

// log det(M^H M) computed from singular values; -inf when the Gram matrix is
// singular (including rows < cols).
double gram_logdet(const ComplexMatrix& m);

// Thin-QR orthonormal basis of the null space of M, as columns.  Vectors with
// sigma_i <= tol_rel * sigma_max belong to the basis; a matrix whose largest
// singular value is at most dead_floor (absolute) counts as the zero map and
// returns the full identity basis.
ComplexMatrix null_space_basis(const ComplexMatrix& m, double tol_rel,
                               double dead_floor);

}  // namespace obskit
