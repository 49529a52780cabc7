#pragma once

// Observability matrix, rank/determinant reports, and the classical
// determinant and Hautus losses.

#include <cstddef>

#include "obskit/loss.hpp"
#include "obskit/matrix.hpp"

namespace obskit {

struct ObservabilityReport {
  std::size_t rank = 0;
  std::size_t n = 0;
  double sigma_min = 0.0;
  double gram_logdet = 0.0;  // log det(O^H O), -inf when singular
  bool observable = false;   // rank == n
  double tol = 0.0;
};

// Row blocks C, CA, ..., CA^{n-1}, an (n m) x n stack.
ComplexMatrix obs_matrix(const ComplexMatrix& c, const ComplexMatrix& a);

ObservabilityReport obs_report(const ComplexMatrix& c, const ComplexMatrix& a,
                               double tol);

// relu(margin - det(O^H O)); the determinant is exp of the Gram log-det with
// underflow clamped to 0.
LossValue loss_obs_det(const ComplexMatrix& c, const ComplexMatrix& a,
                       double margin);

// Sum over eigenvalues lambda_j of relu(margin - det((A - lambda_j I)^H
// (A - lambda_j I) + C^H C)).
LossValue loss_hautus_pencil(const ComplexMatrix& c, const ComplexMatrix& a,
                             double margin);

// Sum_j relu(margin - ||C v_j||^2) over unit-normalized eigenvector columns.
// Necessary-only: zero loss does not certify observability.
LossValue loss_hautus_eigvec(const ComplexMatrix& c, const ComplexMatrix& v,
                             double margin);

inline constexpr double kDefaultMargin = 0.05;

}  // namespace obskit
