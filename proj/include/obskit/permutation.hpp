#pragma once

// Permutation-based observability machinery: the root-of-unity matching
// loss, doubly-stochastic permutation certification, the nearest-permutation
// projection with eigenvalue perturbation bookkeeping, the column
// admissibility check on C, and the perturbed-permutation observability
// check.

#include <cstddef>
#include <vector>

#include "obskit/loss.hpp"
#include "obskit/matrix.hpp"
#include "obskit/observability.hpp"

namespace obskit {

struct PermutationCertificate {
  bool is_permutation = false;
  double row_sum_residual = 0.0;   // max_i |sum_j P_ij - 1|
  double col_sum_residual = 0.0;   // max_j |sum_i P_ij - 1|
  double eig_match_residual = 0.0; // matched distance to {e^{-2 pi i j/n}}
  bool has_nearest_perm = false;
  ComplexMatrix nearest_perm;
  double xi_norm = 0.0;            // ||P - nearest_perm||_F
  double eps_sum = 0.0;            // sum of matched squared eigenvalue gaps
};

// Targets e^{-2 pi i k/n}; with unit_modulus = false the targets carry the
// 1/sqrt(n) scale instead.  Terms: matched eigenvalue distance, row-sum and
// column-sum deviations from 1.
LossValue loss_permutation(const ComplexMatrix& a, bool unit_modulus = true);

// is_permutation requires: row/column sums within tol of 1, entries
// nonnegative within tol, and rounding every entry to {0, 1} producing an
// exact permutation matrix.  The root-of-unity spectral residual is reported
// for diagnostics but does not gate the verdict.
PermutationCertificate certify_permutation(const ComplexMatrix& q, double tol);

// Projects onto the permutation matrices by maximum-weight matching on entry
// magnitudes; fills xi_norm and eps_sum (min-cost eigenvalue matching against
// the projected permutation).  NoAssignment on malformed (non-square/empty)
// input.
PermutationCertificate nearest_permutation(const ComplexMatrix& p, double tol);

// True when no nonzero column is parallel (within tol, by normalized
// residual) to the sum of a maximal linearly independent subset of the other
// columns.
bool check_c_nonconstant(const ComplexMatrix& c, double tol);

struct Theorem2Margins {
  double xi = 0.1;        // largest admissible ||P - Q||_F
  double spectral = 0.1;  // largest admissible root-of-unity mismatch of Q
};

struct Theorem2Report {
  ObservabilityReport report;
  double xi_norm = 0.0;
  double gram_dev = 0.0;     // ||O_P^H O_P - O_Q^H O_Q||_F
  double premise_sum = 0.0;  // sum_i ||(P^i)^H C^H C P^i - (Q^i)^H C^H C Q^i||_F
};

// Observability of (C, P) for P near a permutation with full-cycle spectrum.
// HypothesisFailed when C fails check_c_nonconstant, the nearest permutation
// is farther than margins.xi, or its spectrum misses the roots of unity by
// more than margins.spectral.
Theorem2Report theorem2_check(const ComplexMatrix& c, const ComplexMatrix& p,
                              const Theorem2Margins& margins, double tol);

}  // namespace obskit
